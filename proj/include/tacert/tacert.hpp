#pragma once

#include "tacert/error.hpp"
#include "tacert/maxcut.hpp"
#include "tacert/random.hpp"
#include "tacert/report.hpp"
#include "tacert/sdp.hpp"
#include "tacert/series.hpp"
#include "tacert/suites.hpp"
#include "tacert/sym_matrix.hpp"
#include "tacert/trig_map.hpp"
