#pragma once

// Umbrella header: the whole library in one include.

#include "algorithm.hpp"
#include "datum.hpp"
#include "dynamic_graph.hpp"
#include "engine.hpp"
#include "frequency.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "graph_ops.hpp"
#include "json_io.hpp"
#include "matrix.hpp"
#include "matrix_report.hpp"
#include "minimum_base.hpp"
#include "morphism.hpp"
#include "output.hpp"
#include "pushsum.hpp"
#include "rational.hpp"
#include "scenario.hpp"
#include "static_algo.hpp"
#include "target_function.hpp"
#include "value.hpp"
#include "view.hpp"
