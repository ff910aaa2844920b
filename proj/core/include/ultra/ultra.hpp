#pragma once

#include "ultra/component.hpp"
#include "ultra/consensus.hpp"
#include "ultra/corpus.hpp"
#include "ultra/errors.hpp"
#include "ultra/hierarchy.hpp"
#include "ultra/io.hpp"
#include "ultra/matrix.hpp"
#include "ultra/metric.hpp"
#include "ultra/parallel.hpp"
#include "ultra/spectral.hpp"
#include "ultra/triplets.hpp"
#include "ultra/ultrametricity.hpp"
#include "ultra/version.hpp"
