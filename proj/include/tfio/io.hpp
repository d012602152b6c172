#pragma once

#include "tfio/grid.hpp"

#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace tfio {

// Binary field format: one text header line
//   dims=<d> blocks=<b> N=<n1,..,nb> R=<r1,..,rb>
// followed by little-endian f64 pairs (re, im) in row-major order. All blocks
// must share one dimension.
void write_field(const std::string& path, const SampledField& f);
SampledField read_field(const std::string& path);

// CSV artifact writer: header row, data rows, and a trailing
//   #manifest: key=value ...
// comment line. All numeric formatting is locale-free and deterministic.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::variant<std::string, double, long>>& cells);
    void manifest(const std::map<std::string, std::string>& fields);

    bool ok() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

} // namespace tfio
