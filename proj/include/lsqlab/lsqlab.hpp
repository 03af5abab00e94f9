#pragma once

#include "lsqlab/adversary.hpp"
#include "lsqlab/bench.hpp"
#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/io.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/random.hpp"
#include "lsqlab/separation.hpp"
#include "lsqlab/solvers.hpp"
#include "lsqlab/staircase.hpp"
#include "lsqlab/verify.hpp"
