#pragma once

#include "aoid2d/channel.hpp"
#include "aoid2d/config.hpp"
#include "aoid2d/csv.hpp"
#include "aoid2d/errors.hpp"
#include "aoid2d/experiments.hpp"
#include "aoid2d/metrics.hpp"
#include "aoid2d/optimizer.hpp"
#include "aoid2d/params.hpp"
#include "aoid2d/queue.hpp"
#include "aoid2d/random.hpp"
#include "aoid2d/simulator.hpp"
#include "aoid2d/spatial.hpp"
