#pragma once

#include "mmcheck/error.hpp"
#include "mmcheck/relation.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/graph.hpp"
#include "mmcheck/models.hpp"
#include "mmcheck/coherence.hpp"
#include "mmcheck/solver.hpp"
#include "mmcheck/oracle.hpp"
#include "mmcheck/reduction.hpp"
#include "mmcheck/simgen.hpp"
