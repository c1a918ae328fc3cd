#pragma once

#include "hlat/errors.hpp"
#include "hlat/rational.hpp"
#include "hlat/matrix.hpp"
#include "hlat/smith.hpp"
#include "hlat/symbols.hpp"
#include "hlat/lattice_forms.hpp"
#include "hlat/witness.hpp"
#include "hlat/refine.hpp"
#include "hlat/orders.hpp"
#include "hlat/transfer.hpp"
#include "hlat/gamma.hpp"
#include "hlat/random.hpp"
