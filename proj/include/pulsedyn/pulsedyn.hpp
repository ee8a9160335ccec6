#pragma once

// Periodic solutions of scalar impulsive ODEs xdot = h(x) with
// omega-periodic multiplicative pulses x -> (1+lambda) x, analyzed through
// the time-omega map of the smooth system.

#include "pulsedyn/errors.hpp"
#include "pulsedyn/vector_field.hpp"
#include "pulsedyn/integrate.hpp"
#include "pulsedyn/impulsive.hpp"
#include "pulsedyn/strobe_map.hpp"
#include "pulsedyn/periodic.hpp"
#include "pulsedyn/bifurcation.hpp"
#include "pulsedyn/config.hpp"
#include "pulsedyn/csv.hpp"
