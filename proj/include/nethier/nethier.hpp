#pragma once

#include "nethier/clustering/center.hpp"
#include "nethier/clustering/common.hpp"
#include "nethier/clustering/one_median.hpp"
#include "nethier/clustering/p_median.hpp"
#include "nethier/error.hpp"
#include "nethier/index.hpp"
#include "nethier/metric.hpp"
#include "nethier/net_hierarchy.hpp"
#include "nethier/persist.hpp"
#include "nethier/projected_tree.hpp"
#include "nethier/tree_queries.hpp"
