#pragma once

#include "nmeq/baselines.hpp"
#include "nmeq/bench.hpp"
#include "nmeq/equation.hpp"
#include "nmeq/errors.hpp"
#include "nmeq/existence.hpp"
#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"
#include "nmeq/matrix_io.hpp"
#include "nmeq/pdtls.hpp"
#include "nmeq/probgen.hpp"
#include "nmeq/rng.hpp"
#include "nmeq/solvers.hpp"
