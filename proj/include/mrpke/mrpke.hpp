#pragma once

#include "mrpke/attacks.hpp"
#include "mrpke/bitmatrix.hpp"
#include "mrpke/bytes.hpp"
#include "mrpke/codes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/estimator.hpp"
#include "mrpke/gabidulin.hpp"
#include "mrpke/gf2m.hpp"
#include "mrpke/kat.hpp"
#include "mrpke/onebit.hpp"
#include "mrpke/pke.hpp"
#include "mrpke/reduction.hpp"
#include "mrpke/rng.hpp"
