#pragma once

#include "hytm/bench/bst.hpp"
#include "hytm/bench/csv.hpp"
#include "hytm/bench/linearize.hpp"
#include "hytm/bench/plot.hpp"
#include "hytm/bench/workload.hpp"
#include "hytm/campaign.hpp"
#include "hytm/check/opacity.hpp"
#include "hytm/check/progress.hpp"
#include "hytm/check/witness.hpp"
#include "hytm/lowerbound.hpp"
#include "hytm/world.hpp"
