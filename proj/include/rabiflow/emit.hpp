#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rabiflow/series.hpp"

namespace rabiflow {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// CSV with header `t,observable,provenance,re,im` and one row per
/// (t, series), series after series. Throws on an empty series set.
std::string to_csv(std::span<const TimeSeries> series);
void write_csv(std::span<const TimeSeries> series, const std::filesystem::path& path);

/// Groups rows back into series, keeping first-appearance order.
std::vector<TimeSeries> parse_csv(const std::string& text);
std::vector<TimeSeries> read_csv(const std::filesystem::path& path);

/// Line chart of the real parts: oracle series as dots, everything else as
/// lines (adiabatic-only dashed).
std::string to_svg(std::span<const TimeSeries> series, const std::string& title);
void write_svg(std::span<const TimeSeries> series, const std::filesystem::path& path,
               const std::string& title);

}  // namespace rabiflow
