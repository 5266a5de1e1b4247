#pragma once

// Thermal face recognition pipeline: PNM image core, elliptic-crop
// preprocessing, Haar-wavelet confidence features, block LBP features,
// eigenface PCA, MLP and minimum-distance classifiers, and the experiment
// harness that produces recognition-rate tables.

#include "tfrs/dataset.hpp"
#include "tfrs/errors.hpp"
#include "tfrs/experiment.hpp"
#include "tfrs/lbp.hpp"
#include "tfrs/mindist.hpp"
#include "tfrs/mlp.hpp"
#include "tfrs/parallel.hpp"
#include "tfrs/pca.hpp"
#include "tfrs/pnm.hpp"
#include "tfrs/preprocess.hpp"
#include "tfrs/raster.hpp"
#include "tfrs/rng.hpp"
#include "tfrs/serialize.hpp"
#include "tfrs/wavelet.hpp"
