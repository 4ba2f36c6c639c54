#pragma once

#include "qmaass/bailey.hpp"
#include "qmaass/bessel.hpp"
#include "qmaass/cyclotomic.hpp"
#include "qmaass/fser.hpp"
#include "qmaass/hpoly.hpp"
#include "qmaass/maass.hpp"
#include "qmaass/qcombinat.hpp"
#include "qmaass/qseries.hpp"
#include "qmaass/rational.hpp"
#include "qmaass/report.hpp"
#include "qmaass/serialize.hpp"
#include "qmaass/suites.hpp"
#include "qmaass/theta.hpp"
#include "qmaass/theta_numeric.hpp"
