#pragma once

#include "ftd/common.hpp"
#include "ftd/experiments.hpp"
#include "ftd/gadgets.hpp"
#include "ftd/graph.hpp"
#include "ftd/lp_oracle.hpp"
#include "ftd/pattern.hpp"
#include "ftd/pattern_verifier.hpp"
#include "ftd/plot.hpp"
#include "ftd/solver.hpp"
#include "ftd/weighting.hpp"
