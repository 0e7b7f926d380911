#pragma once

// Umbrella header.

#include "heatflow/cubic.hpp"
#include "heatflow/errors.hpp"
#include "heatflow/fingerprint.hpp"
#include "heatflow/flow.hpp"
#include "heatflow/heat.hpp"
#include "heatflow/oracle.hpp"
#include "heatflow/parse.hpp"
#include "heatflow/polynomial.hpp"
#include "heatflow/quartic.hpp"
#include "heatflow/render.hpp"
#include "heatflow/resultant.hpp"
#include "heatflow/roots.hpp"
#include "heatflow/sextic.hpp"
