#ifndef RD2D_RD2D_HPP
#define RD2D_RD2D_HPP

#include "baseline.hpp"
#include "channel.hpp"
#include "experiment.hpp"
#include "grid.hpp"
#include "metrics.hpp"
#include "mpsolver.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "powerctl.hpp"
#include "ratemodel.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "units.hpp"

#endif
