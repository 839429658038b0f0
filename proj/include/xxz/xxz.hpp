#pragma once

#include "xxz/chain_model.hpp"
#include "xxz/channel.hpp"
#include "xxz/closed_forms.hpp"
#include "xxz/eigensolver.hpp"
#include "xxz/entanglement.hpp"
#include "xxz/errors.hpp"
#include "xxz/hamiltonian.hpp"
#include "xxz/regimes.hpp"
#include "xxz/sweep.hpp"
