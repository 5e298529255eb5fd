#pragma once

#include "ifmlab/core.hpp"
#include "ifmlab/engine.hpp"
#include "ifmlab/experiment.hpp"
#include "ifmlab/optics.hpp"
#include "ifmlab/scenario.hpp"
#include "ifmlab/two_state.hpp"
