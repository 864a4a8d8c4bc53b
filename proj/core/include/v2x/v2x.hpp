#pragma once

#include "v2x/baselines.hpp"
#include "v2x/capacity.hpp"
#include "v2x/channel_model.hpp"
#include "v2x/error.hpp"
#include "v2x/link_instance.hpp"
#include "v2x/orchestrate.hpp"
#include "v2x/population.hpp"
#include "v2x/random.hpp"
#include "v2x/relay_selection.hpp"
#include "v2x/sweep.hpp"
#include "v2x/tolerance.hpp"
#include "v2x/types.hpp"
