#pragma once

#include "sfs/evaluation.hpp"
#include "sfs/experiment.hpp"
#include "sfs/gaunt.hpp"
#include "sfs/indexing.hpp"
#include "sfs/quadrature.hpp"
#include "sfs/radiation.hpp"
#include "sfs/scenario.hpp"
#include "sfs/scenario_io.hpp"
#include "sfs/solvers.hpp"
#include "sfs/specfun.hpp"
#include "sfs/wavefield.hpp"
