#pragma once

#include "smkp/constants.hpp"
#include "smkp/errors.hpp"
#include "smkp/model.hpp"
#include "smkp/numdiff.hpp"
#include "smkp/oracle.hpp"
#include "smkp/special_functions.hpp"
#include "smkp/spectrum.hpp"
#include "smkp/statmech.hpp"
#include "smkp/version.hpp"
