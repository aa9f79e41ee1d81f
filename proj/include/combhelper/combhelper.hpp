#pragma once

#include "combhelper/adam.hpp"
#include "combhelper/boost.hpp"
#include "combhelper/config.hpp"
#include "combhelper/error.hpp"
#include "combhelper/exact.hpp"
#include "combhelper/gcn.hpp"
#include "combhelper/graph.hpp"
#include "combhelper/greedy.hpp"
#include "combhelper/labels.hpp"
#include "combhelper/local_search.hpp"
#include "combhelper/loss.hpp"
#include "combhelper/node_set.hpp"
#include "combhelper/params_io.hpp"
#include "combhelper/pipeline.hpp"
#include "combhelper/report.hpp"
#include "combhelper/rng.hpp"
#include "combhelper/solution.hpp"
#include "combhelper/solvers.hpp"
#include "combhelper/trainer.hpp"
