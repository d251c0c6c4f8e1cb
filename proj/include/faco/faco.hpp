#pragma once

#include "faco/construction.hpp"
#include "faco/error.hpp"
#include "faco/local_search.hpp"
#include "faco/neighbors.hpp"
#include "faco/pheromone.hpp"
#include "faco/random.hpp"
#include "faco/route.hpp"
#include "faco/solver.hpp"
#include "faco/tsp_instance.hpp"
#include "faco/worker_pool.hpp"
