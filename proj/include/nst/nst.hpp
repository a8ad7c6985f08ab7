#pragma once

#include "nst/bench.hpp"
#include "nst/certificate.hpp"
#include "nst/linalg.hpp"
#include "nst/matrix_io.hpp"
#include "nst/problems.hpp"
#include "nst/rip.hpp"
#include "nst/rng.hpp"
#include "nst/schedule.hpp"
#include "nst/solvers.hpp"
#include "nst/support.hpp"
#include "nst/types.hpp"
