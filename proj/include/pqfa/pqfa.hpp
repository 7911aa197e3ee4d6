#pragma once

// Convenience umbrella: pulls in the whole library.

#include "pqfa/automaton.hpp"
#include "pqfa/montecarlo.hpp"
#include "pqfa/photon_model.hpp"
#include "pqfa/special_functions.hpp"
#include "pqfa/strategies.hpp"
#include "pqfa/sweep.hpp"
#include "pqfa/version.hpp"
