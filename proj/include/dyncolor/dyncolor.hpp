#pragma once

#include "det_vertex_coloring.hpp"
#include "edge_coloring.hpp"
#include "graph.hpp"
#include "greedy_coloring.hpp"
#include "hierarchy.hpp"
#include "index_list.hpp"
#include "rand_vertex_coloring.hpp"
#include "trace.hpp"
#include "verify.hpp"
