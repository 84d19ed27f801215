#pragma once

// Umbrella header.

#include "limqr/types.hpp"
#include "limqr/geometry.hpp"
#include "limqr/quadrature.hpp"
#include "limqr/green.hpp"
#include "limqr/linear_operator.hpp"
#include "limqr/rbf.hpp"
#include "limqr/rbfqr.hpp"
#include "limqr/local.hpp"
#include "limqr/linalg.hpp"
#include "limqr/problem.hpp"
#include "limqr/assembly.hpp"
#include "limqr/bench.hpp"
#include "limqr/csv.hpp"
#include "limqr/svg.hpp"
