#pragma once

#include "arith.hpp"
#include "bounds.hpp"
#include "characters.hpp"
#include "equidist.hpp"
#include "lfunc.hpp"
#include "magnitude.hpp"
#include "meanvalue.hpp"
#include "params.hpp"
#include "polydisc.hpp"
#include "primes.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "euni/config.hpp"
