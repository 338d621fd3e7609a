#pragma once

// Umbrella header.

#include "linklab/catalog.hpp"
#include "linklab/crossing.hpp"
#include "linklab/distance.hpp"
#include "linklab/geometry.hpp"
#include "linklab/intersection.hpp"
#include "linklab/json_io.hpp"
#include "linklab/linalg.hpp"
#include "linklab/linking.hpp"
#include "linklab/mesh.hpp"
#include "linklab/parallel.hpp"
#include "linklab/patch.hpp"
#include "linklab/random.hpp"
#include "linklab/report.hpp"
#include "linklab/words.hpp"
