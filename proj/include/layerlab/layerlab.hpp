#pragma once

#include "layerlab/cli.hpp"
#include "layerlab/diskgeom.hpp"
#include "layerlab/errors.hpp"
#include "layerlab/forward.hpp"
#include "layerlab/io.hpp"
#include "layerlab/media.hpp"
#include "layerlab/oracle.hpp"
#include "layerlab/rational.hpp"
#include "layerlab/scalar.hpp"
#include "layerlab/spoly.hpp"
