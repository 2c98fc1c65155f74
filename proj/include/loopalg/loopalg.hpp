#pragma once

#include "loopalg/errors.hpp"
#include "loopalg/scalar.hpp"
#include "loopalg/linalg.hpp"
#include "loopalg/dga.hpp"
#include "loopalg/io.hpp"
#include "loopalg/cobar.hpp"
#include "loopalg/complex.hpp"
#include "loopalg/hochschild.hpp"
#include "loopalg/omega.hpp"
#include "loopalg/ring.hpp"
#include "loopalg/intersection.hpp"
#include "loopalg/report.hpp"
