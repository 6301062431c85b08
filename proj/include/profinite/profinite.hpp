// Umbrella header.

#ifndef PROFINITE_PROFINITE_HPP_
#define PROFINITE_PROFINITE_HPP_

#include "cantor.hpp"
#include "error.hpp"
#include "filter.hpp"
#include "finite_group.hpp"
#include "format.hpp"
#include "fp_linear.hpp"
#include "lattice.hpp"
#include "mekler.hpp"
#include "parse.hpp"
#include "sl_family.hpp"
#include "tabulate.hpp"
#include "word.hpp"

#endif
