#ifndef LFCOMP_LFCOMP_HPP
#define LFCOMP_LFCOMP_HPP

#include "lfcomp/types.hpp"
#include "lfcomp/ball_geometry.hpp"
#include "lfcomp/linfrac.hpp"
#include "lfcomp/spaces.hpp"
#include "lfcomp/polynomial.hpp"
#include "lfcomp/operators.hpp"
#include "lfcomp/witness.hpp"

#endif  // LFCOMP_LFCOMP_HPP
