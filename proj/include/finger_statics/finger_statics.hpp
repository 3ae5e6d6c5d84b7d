#pragma once

#include "finger_statics/errors.hpp"
#include "finger_statics/geometry.hpp"
#include "finger_statics/cable_statics.hpp"
#include "finger_statics/equilibrium_oracle.hpp"
#include "finger_statics/nelder_mead.hpp"
#include "finger_statics/calibration.hpp"
#include "finger_statics/design_space.hpp"
#include "finger_statics/requirements.hpp"
#include "finger_statics/io.hpp"
