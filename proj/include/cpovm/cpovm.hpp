#pragma once

#include "cpovm/types.hpp"
#include "cpovm/linalg.hpp"
#include "cpovm/lca_group.hpp"
#include "cpovm/weyl_repr.hpp"
#include "cpovm/hs_isometry.hpp"
#include "cpovm/covariant_povm.hpp"
#include "cpovm/channels.hpp"
#include "cpovm/cv_oscillator.hpp"
#include "cpovm/random.hpp"
