#pragma once

#include "jiomber/baselines.hpp"
#include "jiomber/complexity.hpp"
#include "jiomber/config.hpp"
#include "jiomber/detector_core.hpp"
#include "jiomber/errors.hpp"
#include "jiomber/harness.hpp"
#include "jiomber/jio_mber.hpp"
#include "jiomber/signal_model.hpp"
