#pragma once

#include "ellgen/error.hpp"
#include "ellgen/rational.hpp"
#include "ellgen/checked_int.hpp"
#include "ellgen/qy_series.hpp"
#include "ellgen/ratfun_y.hpp"
#include "ellgen/x_series.hpp"
#include "ellgen/modforms.hpp"
#include "ellgen/genus_engine.hpp"
#include "ellgen/lattice.hpp"
#include "ellgen/toric.hpp"
#include "ellgen/polytope.hpp"
#include "ellgen/symprod.hpp"
#include "ellgen/io.hpp"
#include "ellgen/verify.hpp"
