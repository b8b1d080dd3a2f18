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

#include "soundscape/indices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "soundscape/error.hpp"

namespace soundscape {

double aci(const Spectrogram& spec, std::optional<double> chunk_s) {
  if (spec.scale != SpectrogramScale::kLinearMagnitude) {
    throw ValidationError("aci: input must be a linear-magnitude spectrogram");
  }
  if (spec.frames < 2) throw ValidationError("aci: need at least 2 frames");

  std::size_t chunk = spec.frames;
  if (chunk_s) {
    if (!(spec.frame_hop_s > 0.0)) {
      throw ValidationError("aci: spectrogram has no frame hop");
    }
    const double frames = *chunk_s / spec.frame_hop_s;
    if (!(frames + 1e-9 >= 2.0)) {
      throw ValidationError("aci: chunk must span at least 2 frames");
    }
    chunk = std::min(spec.frames,
                     static_cast<std::size_t>(std::floor(frames + 1e-9)));
  }

  double total = 0.0;
  for (std::size_t start = 0; start < spec.frames; start += chunk) {
    const std::size_t end = std::min(spec.frames, start + chunk);
    if (end - start < 2) break;
    for (std::size_t f = 0; f < spec.bins; ++f) {
      double diff = 0.0;
      double sum = spec.at(start, f);
      for (std::size_t t = start + 1; t < end; ++t) {
        const double a = spec.at(t, f);
        diff += std::abs(a - static_cast<double>(spec.at(t - 1, f)));
        sum += a;
      }
      if (sum > 0.0) total += diff / sum;
    }
  }
  return total;
}

std::vector<double> adi_band_occupancy(const Spectrogram& spec,
                                       const AdiParams& params) {
  if (spec.scale != SpectrogramScale::kLinearMagnitude) {
    throw ValidationError("adi: input must be a linear-magnitude spectrogram");
  }
  if (spec.bins < 2 || spec.frames == 0) {
    throw ValidationError("adi: empty spectrogram");
  }
  const double nyquist = spec.bin_freqs_hz.back();
  if (params.max_freq_hz > nyquist + 1e-9) {
    throw ValidationError("adi: max frequency " +
                          std::to_string(params.max_freq_hz) +
                          " Hz exceeds Nyquist " + std::to_string(nyquist) +
                          " Hz");
  }
  if (!(params.band_width_hz > 0.0)) {
    throw ValidationError("adi: band width must be positive");
  }
  const double ratio = params.max_freq_hz / params.band_width_hz;
  const auto n_bands = static_cast<std::size_t>(std::llround(ratio));
  if (n_bands < 2 || std::abs(ratio - static_cast<double>(n_bands)) > 1e-6) {
    throw ValidationError(
        "adi: band width must split (0, max_freq] into >= 2 equal bands");
  }

  // Full-scale sine under a periodic Hann window of W samples peaks at W/4.
  const double window_len = 2.0 * static_cast<double>(spec.bins - 1);
  const double reference =
      params.reference_magnitude.value_or(window_len / 4.0);
  const double linear_threshold =
      reference * std::pow(10.0, params.db_threshold / 20.0);

  std::vector<std::size_t> above(n_bands, 0);
  std::vector<std::size_t> cells(n_bands, 0);
  for (std::size_t k = 0; k < spec.bins; ++k) {
    const double f = spec.bin_freqs_hz[k];
    if (f >= params.max_freq_hz) break;
    const auto band = std::min(
        n_bands - 1, static_cast<std::size_t>(f / params.band_width_hz));
    cells[band] += spec.frames;
    for (std::size_t t = 0; t < spec.frames; ++t) {
      if (spec.at(t, k) > linear_threshold) ++above[band];
    }
  }
  std::vector<double> occupancy(n_bands, 0.0);
  for (std::size_t b = 0; b < n_bands; ++b) {
    if (cells[b] > 0) {
      occupancy[b] = static_cast<double>(above[b]) / static_cast<double>(cells[b]);
    }
  }
  return occupancy;
}

double adi_from_occupancy(std::span<const double> occupancy) {
  const double total = std::accumulate(occupancy.begin(), occupancy.end(), 0.0);
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (double q : occupancy) {
    if (q <= 0.0) continue;
    const double p = q / total;
    h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

double adi(const Spectrogram& spec, const AdiParams& params) {
  return adi_from_occupancy(adi_band_occupancy(spec, params));
}

PowerSpectrum welch_psd(const AudioClip& clip, std::size_t segment_len) {
  if (segment_len < 2) throw ValidationError("welch: segment too short");
  if (clip.samples.size() < segment_len) {
    throw ValidationError("welch: clip of " +
                          std::to_string(clip.samples.size()) +
                          " samples is shorter than one segment of " +
                          std::to_string(segment_len));
  }
  const std::size_t step = segment_len / 2;
  const auto window = hann_window(segment_len);
  double window_power = 0.0;
  for (double w : window) window_power += w * w;

  detail::RealFft fft(segment_len);
  PowerSpectrum out;
  const std::size_t bins = fft.bins();
  out.psd.assign(bins, 0.0);
  out.bin_width_hz = static_cast<double>(clip.sample_rate_hz) / segment_len;
  out.freqs_hz.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) out.freqs_hz[k] = k * out.bin_width_hz;

  std::size_t segments = 0;
  auto in = fft.input();
  for (std::size_t start = 0; start + segment_len <= clip.samples.size();
       start += step) {
    double mean = 0.0;
    for (std::size_t i = 0; i < segment_len; ++i) mean += clip.samples[start + i];
    mean /= segment_len;
    for (std::size_t i = 0; i < segment_len; ++i) {
      in[i] = (clip.samples[start + i] - mean) * window[i];
    }
    const auto spectrum = fft.execute();
    for (std::size_t k = 0; k < bins; ++k) out.psd[k] += std::norm(spectrum[k]);
    ++segments;
  }

  const double scale = 1.0 / (clip.sample_rate_hz * window_power * segments);
  for (std::size_t k = 0; k < bins; ++k) {
    out.psd[k] *= scale;
    const bool edge = k == 0 || (segment_len % 2 == 0 && k == bins - 1);
    if (!edge) out.psd[k] *= 2.0;
  }
  return out;
}

double band_power(const PowerSpectrum& psd, FrequencyBand band) {
  double acc = 0.0;
  for (std::size_t k = 0; k < psd.psd.size(); ++k) {
    const double f = psd.freqs_hz[k];
    if (f >= band.low_hz && f < band.high_hz) acc += psd.psd[k];
  }
  return acc * psd.bin_width_hz;
}

std::optional<double> ndsi_from_band_powers(double anthro, double bio) {
  const double total = anthro + bio;
  if (!(total > 0.0)) return std::nullopt;
  return (bio - anthro) / total;
}

std::optional<double> ndsi(const AudioClip& clip, const NdsiParams& params) {
  const double nyquist = clip.sample_rate_hz / 2.0;
  for (const auto& band : {params.anthro, params.bio}) {
    if (!(band.low_hz >= 0.0) || !(band.low_hz < band.high_hz) ||
        band.high_hz > nyquist + 1e-9) {
      throw ValidationError("ndsi: band [" + std::to_string(band.low_hz) +
                            ", " + std::to_string(band.high_hz) +
                            ") Hz is empty or above Nyquist");
    }
  }
  if (params.anthro.low_hz < params.bio.high_hz &&
      params.bio.low_hz < params.anthro.high_hz) {
    throw ValidationError("ndsi: anthrophony and biophony bands overlap");
  }

  const PowerSpectrum psd = welch_psd(clip, params.segment_len);
  const double total = band_power(psd, {0.0, nyquist + psd.bin_width_hz});
  double anthro = band_power(psd, params.anthro);
  double bio = band_power(psd, params.bio);
  const double floor = params.power_floor * total;
  if (anthro < floor) anthro = 0.0;
  if (bio < floor) bio = 0.0;
  return ndsi_from_band_powers(anthro, bio);
}

IndexResult compute_indices(const AudioClip& clip, const IndexParams& params) {
  const Spectrogram spec =
      stft_magnitude(clip, params.window_len, params.hop);
  IndexResult out;
  out.recording_id = clip.source_id;
  out.aci = aci(spec, params.aci_chunk_s);
  out.adi = adi(spec, params.adi);
  out.ndsi = ndsi(clip, params.ndsi);
  return out;
}

}  // namespace soundscape
