#pragma once

#include "eegintent/core/acquisition.hpp"
#include "eegintent/core/dataset.hpp"
#include "eegintent/core/dataset_io.hpp"
#include "eegintent/core/montage.hpp"
#include "eegintent/core/split.hpp"
#include "eegintent/error.hpp"
#include "eegintent/eval/metrics.hpp"
#include "eegintent/model/config.hpp"
#include "eegintent/model/loss.hpp"
#include "eegintent/model/mmd.hpp"
#include "eegintent/model/model_io.hpp"
#include "eegintent/model/network.hpp"
#include "eegintent/model/train.hpp"
#include "eegintent/spectral/bands.hpp"
#include "eegintent/spectral/feature_io.hpp"
#include "eegintent/spectral/features.hpp"
#include "eegintent/spectral/fft.hpp"
#include "eegintent/spectral/welch.hpp"
#include "eegintent/stats/fdr.hpp"
#include "eegintent/stats/student_t.hpp"
#include "eegintent/stats/topomap.hpp"
#include "eegintent/stats/ttest.hpp"
#include "eegintent/synth/generator.hpp"
#include "eegintent/synth/pink_noise.hpp"
