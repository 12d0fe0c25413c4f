#pragma once

#include "jetcalc/dist.hpp"
#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/parse.hpp"
#include "jetcalc/poly.hpp"
#include "jetcalc/rational.hpp"
#include "jetcalc/recover.hpp"
#include "jetcalc/testspace.hpp"
