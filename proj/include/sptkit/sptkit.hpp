#pragma once

#include "sptkit/acceptance.hpp"
#include "sptkit/circuit.hpp"
#include "sptkit/cohomology.hpp"
#include "sptkit/detector.hpp"
#include "sptkit/group.hpp"
#include "sptkit/json_io.hpp"
#include "sptkit/locality.hpp"
#include "sptkit/mps.hpp"
#include "sptkit/proj_rep.hpp"
#include "sptkit/spt_index.hpp"
#include "sptkit/states.hpp"
