#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rabiflow/spectral.hpp"

namespace rabiflow {

enum class Provenance { oracle, closed_form, phase_space, adiabatic_only };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

/// Uniformly sampled expectation values of one observable from one source.
struct TimeSeries {
  std::string observable;  // "sigma3" or "field"
  Provenance provenance = Provenance::oracle;
  std::vector<double> t;
  std::vector<cplx> values;

  std::size_t size() const { return t.size(); }
  std::vector<double> real() const;
  std::vector<double> imag() const;
  std::string key() const;  // "observable/provenance"
};

}  // namespace rabiflow
