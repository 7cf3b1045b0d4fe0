#pragma once

// Options over an MDP induce a regular splitting of I - gamma P_sigma;
// these headers build the models, the splittings, and the solvers around
// that fact.

#include "optsplit/call_return.hpp"
#include "optsplit/gating.hpp"
#include "optsplit/mdp.hpp"
#include "optsplit/solver.hpp"
#include "optsplit/spectral.hpp"
#include "optsplit/splitting.hpp"
#include "optsplit/types.hpp"
