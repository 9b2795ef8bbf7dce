#pragma once

#include "pathattack/graph.hpp"
#include "pathattack/path_enum.hpp"
#include "pathattack/lp.hpp"
#include "pathattack/set_cover.hpp"
#include "pathattack/attack.hpp"
#include "pathattack/reduction.hpp"
#include "pathattack/generators.hpp"
#include "pathattack/harness.hpp"
