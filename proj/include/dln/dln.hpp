#pragma once

// Umbrella header.

#include "dln/adaptive.hpp"
#include "dln/bdf2.hpp"
#include "dln/csv.hpp"
#include "dln/experiments.hpp"
#include "dln/fft.hpp"
#include "dln/flow.hpp"
#include "dln/grid.hpp"
#include "dln/norms.hpp"
#include "dln/ode.hpp"
#include "dln/one_leg.hpp"
#include "dln/scheme.hpp"
#include "dln/schedules.hpp"
#include "dln/solver.hpp"
#include "dln/stability.hpp"
#include "dln/vec.hpp"
