#pragma once

#include "dtcover/errors.hpp"
#include "dtcover/rational.hpp"
#include "dtcover/curve_class.hpp"
#include "dtcover/dual_graph.hpp"
#include "dtcover/formal_series.hpp"
#include "dtcover/cyclic_cover.hpp"
#include "dtcover/invariants.hpp"
#include "dtcover/parabolic.hpp"
#include "dtcover/k3.hpp"
#include "dtcover/config.hpp"
