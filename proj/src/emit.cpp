#include "rabiflow/emit.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rabiflow {

namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("CSV: bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::oracle:
      return "oracle";
    case Provenance::closed_form:
      return "closed-form";
    case Provenance::phase_space:
      return "phase-space";
    case Provenance::adiabatic_only:
      return "adiabatic-only";
  }
  return "unknown";
}

Provenance provenance_from_string(std::string_view name) {
  for (Provenance p : {Provenance::oracle, Provenance::closed_form, Provenance::phase_space,
                       Provenance::adiabatic_only}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown provenance '" + std::string(name) + "'");
}

std::vector<double> TimeSeries::real() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx v) { return v.real(); });
  return out;
}

std::vector<double> TimeSeries::imag() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx v) { return v.imag(); });
  return out;
}

std::string TimeSeries::key() const { return observable + "/" + std::string(to_string(provenance)); }

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return {buf, ptr};
}

std::string to_csv(std::span<const TimeSeries> series) {
  if (series.empty()) throw std::invalid_argument("emit: empty series set");
  std::string out = "t,observable,provenance,re,im\n";
  for (const TimeSeries& s : series) {
    if (s.t.size() != s.values.size()) throw std::invalid_argument("emit: ragged series " + s.key());
    const std::string prov(to_string(s.provenance));
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      out += format_double(s.t[i]);
      out += ',';
      out += s.observable;
      out += ',';
      out += prov;
      out += ',';
      out += format_double(s.values[i].real());
      out += ',';
      out += format_double(s.values[i].imag());
      out += '\n';
    }
  }
  return out;
}

void write_csv(std::span<const TimeSeries> series, const std::filesystem::path& path) {
  write_text(to_csv(series), path);
}

std::vector<TimeSeries> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,observable,provenance,re,im") {
    throw std::runtime_error("CSV: missing or unexpected header");
  }
  std::vector<TimeSeries> out;
  std::map<std::string, std::size_t> slot;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cols.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cols.push_back(rest);
    if (cols.size() != 5) {
      throw std::runtime_error("CSV: line " + std::to_string(line_no) + " has " +
                               std::to_string(cols.size()) + " columns");
    }
    const std::string key = std::string(cols[1]) + "/" + std::string(cols[2]);
    auto it = slot.find(key);
    if (it == slot.end()) {
      TimeSeries s;
      s.observable = std::string(cols[1]);
      s.provenance = provenance_from_string(cols[2]);
      out.push_back(std::move(s));
      it = slot.emplace(key, out.size() - 1).first;
    }
    TimeSeries& s = out[it->second];
    s.t.push_back(parse_double(cols[0]));
    s.values.emplace_back(parse_double(cols[3]), parse_double(cols[4]));
  }
  return out;
}

std::vector<TimeSeries> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str());
}

std::string to_svg(std::span<const TimeSeries> series, const std::string& title) {
  if (series.empty()) throw std::invalid_argument("emit: empty series set");
  constexpr double width = 720.0;
  constexpr double height = 420.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;

  double t0 = 1e300, t1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const TimeSeries& s : series) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      t0 = std::min(t0, s.t[i]);
      t1 = std::max(t1, s.t[i]);
      y0 = std::min(y0, s.values[i].real());
      y1 = std::max(y1, s.values[i].real());
    }
  }
  if (t1 <= t0) t1 = t0 + 1.0;
  if (y1 <= y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * (width - left - right); };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * (height - top - bottom); };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">" << title << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
      << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double tv = t0 + (t1 - t0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    svg << "<text x=\"" << px(tv) << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tv
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << yv
        << "</text>\n";
  }
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t</text>\n";

  int legend = 0;
  for (const TimeSeries& s : series) {
    std::string colour = "#1f5fbf";
    std::string dash;
    if (s.provenance == Provenance::adiabatic_only) {
      colour = "#c0392b";
      dash = " stroke-dasharray=\"6,4\"";
    } else if (s.provenance == Provenance::phase_space) {
      colour = "#27ae60";
    }
    if (s.provenance == Provenance::oracle) {
      colour = "black";
      for (std::size_t i = 0; i < s.size(); ++i) {
        svg << "<circle cx=\"" << px(s.t[i]) << "\" cy=\"" << py(s.values[i].real())
            << "\" r=\"1.6\" fill=\"black\"/>\n";
      }
    } else {
      svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.4\"" << dash
          << " points=\"";
      for (std::size_t i = 0; i < s.size(); ++i) {
        svg << px(s.t[i]) << ',' << py(s.values[i].real()) << ' ';
      }
      svg << "\"/>\n";
    }
    svg << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 14 * legend
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colour << "\">" << s.key()
        << "</text>\n";
    ++legend;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(std::span<const TimeSeries> series, const std::filesystem::path& path,
               const std::string& title) {
  write_text(to_svg(series, title), path);
}

}  // namespace rabiflow
