#pragma once

#include "wim/chisq.hpp"
#include "wim/errors.hpp"
#include "wim/fit.hpp"
#include "wim/intlinalg.hpp"
#include "wim/io.hpp"
#include "wim/markov_basis.hpp"
#include "wim/mcmc.hpp"
#include "wim/model.hpp"
#include "wim/suffstat.hpp"
#include "wim/version.hpp"
