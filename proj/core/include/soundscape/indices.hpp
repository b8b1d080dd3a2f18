// Copyright 2026  The soundscape authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>

#include "soundscape/audio_io.hpp"
#include "soundscape/features.hpp"

namespace soundscape {

/// Acoustic Complexity Index.
///
/// For every frequency bin f and temporal chunk j:
///   ACI_fj = sum_t |a(f,t+1) - a(f,t)| / sum_t a(f,t)
/// where both sums run over the frames of the chunk. Chunks are consecutive
/// and non-overlapping; a trailing partial chunk counts if it holds at least
/// two frames. A chunk whose amplitude sum is zero contributes 0. The result
/// is the sum over all bins and chunks.
///
/// `chunk_s` unset means one chunk spanning the whole spectrogram.
double aci(const Spectrogram& spec, std::optional<double> chunk_s = {});

/// Acoustic Diversity Index.
///
/// Magnitudes are converted to dBFS against `reference_magnitude` (default:
/// the peak STFT magnitude of a full-scale sine under the periodic Hann
/// window, W/4 with W = 2 * (bins - 1)). Bands of `band_width_hz` partition
/// [0, max_freq_hz]; each band's occupancy is the fraction of its cells
/// above `db_threshold`. ADI is the Shannon entropy (natural log) of the
/// normalised occupancies, 0 when nothing is occupied.
struct AdiParams {
  double band_width_hz = 1000.0;
  double max_freq_hz = 10000.0;
  double db_threshold = -50.0;
  std::optional<double> reference_magnitude;
};
double adi(const Spectrogram& spec, const AdiParams& params = {});

/// Per-band occupancy fractions behind adi().
std::vector<double> adi_band_occupancy(const Spectrogram& spec,
                                       const AdiParams& params = {});

/// Shannon entropy of the occupancies after normalising them to sum 1.
double adi_from_occupancy(std::span<const double> occupancy);

struct FrequencyBand {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

/// Normalised Difference Soundscape Index, (B - A) / (B + A).
struct NdsiParams {
  FrequencyBand anthro{1000.0, 2000.0};
  FrequencyBand bio{2000.0, 8000.0};
  std::size_t segment_len = 1024;
  /// Band powers below this fraction of total power count as zero.
  double power_floor = 1e-12;
};

/// Welch power spectral density: Hann segments of `segment_len`, 50%
/// overlap, one-sided, density scaling (power per Hz).
struct PowerSpectrum {
  std::vector<double> freqs_hz;
  std::vector<double> psd;
  double bin_width_hz = 0.0;
};
PowerSpectrum welch_psd(const AudioClip& clip, std::size_t segment_len);

/// PSD integrated over [low, high).
double band_power(const PowerSpectrum& psd, FrequencyBand band);

/// (bio - anthro) / (bio + anthro); nullopt when both are zero.
std::optional<double> ndsi_from_band_powers(double anthro, double bio);

/// Empty optional when both band powers are zero (after the leakage floor).
std::optional<double> ndsi(const AudioClip& clip, const NdsiParams& params = {});

struct IndexParams {
  std::size_t window_len = 1024;
  std::size_t hop = 1024;
  std::optional<double> aci_chunk_s;
  AdiParams adi;
  NdsiParams ndsi;
};

struct IndexResult {
  std::string recording_id;
  double aci = 0.0;
  double adi = 0.0;
  std::optional<double> ndsi;
};

/// All three indices from one clip (native sample rate).
IndexResult compute_indices(const AudioClip& clip,
                            const IndexParams& params = {});

}  // namespace soundscape
