#pragma once

#include <string>

#include "canonica/lattices.hpp"
#include "canonica/lct.hpp"
#include "canonica/phase_retrieval.hpp"
#include "canonica/signal.hpp"
#include "canonica/stlct.hpp"
#include "canonica/windows.hpp"

namespace canonica {

// Wire-format parsers. parse_* take JSON text, read_* load a file; anything
// malformed, mistyped, or length-mismatched throws input_error. Sampling
// sets are rebuilt through their generators, so admissibility violations
// surface as parameter_error.
Grid parse_grid(const std::string& text);
Signal parse_signal(const std::string& text);
LctParams parse_params(const std::string& text);
WindowSpec parse_window(const std::string& text);
SamplingSet parse_sampling(const std::string& text);
MeasurementSet parse_measurement(const std::string& text);

Grid read_grid(const std::string& path);
Signal read_signal(const std::string& path);
LctParams read_params(const std::string& path);
WindowSpec read_window(const std::string& path);
SamplingSet read_sampling(const std::string& path);
MeasurementSet read_measurement(const std::string& path);

// Serializers. Every real is printed with 17 significant digits so doubles
// survive a round trip exactly, and key order is fixed so identical data
// yields identical bytes. Non-finite values are rejected. Line-family sets
// serialize as explicit point lists (the generator's mu grid is not
// retained); sqrt and bandlimited sets keep their generator form.
std::string format_real(double x);
std::string format_grid(const Grid& g);
std::string format_signal(const Signal& f);
std::string format_params(const LctParams& A);
std::string format_window(const WindowSpec& w);
std::string format_sampling(const SamplingSet& s);
std::string format_measurement(const MeasurementSet& m);

// CSV exports, 17 significant digits. Sampling sets: header "x,mu".
// Spectrogram samples: header "x,mu,re,im,mag".
std::string format_points_csv(const SamplingSet& s);
std::string format_spectrogram_csv(const SpectrogramSamples& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace canonica
