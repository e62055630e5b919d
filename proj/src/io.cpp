#include "hjlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hjlab {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const GridFunction& u) {
  std::ostringstream out;
  out << "x,u\n";
  for (int j = 0; j < u.size(); ++j)
    out << format_double(u.node(j)) << ',' << format_double(u[j]) << '\n';
  atomic_write_text(path, out.str());
}

void write_csv(const std::filesystem::path& path, const TimeSlab& slab) {
  std::ostringstream out;
  out << "t,x,u\n";
  const int n = slab.grid_size();
  for (size_t k = 0; k < slab.times.size(); ++k)
    for (int j = 0; j < n; ++j)
      out << format_double(slab.times[k]) << ','
          << format_double(static_cast<double>(j) / n) << ','
          << format_double(slab.values(j, static_cast<Eigen::Index>(k))) << '\n';
  atomic_write_text(path, out.str());
}

GridFunction read_csv_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,u")
    throw std::invalid_argument(path.string() + ": expected header \"x,u\"");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument(path.string() + ": malformed row: " + line);
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument(path.string() + ": bad number in row: " + line);
    }
  }
  Eigen::ArrayXd v(static_cast<Eigen::Index>(values.size()));
  for (size_t j = 0; j < values.size(); ++j)
    v[static_cast<Eigen::Index>(j)] = values[j];
  return GridFunction(std::move(v));
}

}  // namespace hjlab
