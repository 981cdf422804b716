#pragma once

#include "contour.hpp"
#include "domain.hpp"
#include "edt.hpp"
#include "error.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "minimizer.hpp"
#include "morphology.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "reference.hpp"
#include "report.hpp"
#include "svg.hpp"
