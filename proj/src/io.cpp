#include "tfio/io.hpp"

#include "tfio/config.hpp"

#include <bit>
#include <cstring>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "field serialization assumes a little-endian host");

namespace tfio {

void write_field(const std::string& path, const SampledField& f) {
    if (f.blocks.empty()) throw std::invalid_argument("write_field: empty field");
    const int d = f.blocks[0].dim;
    for (const auto& b : f.blocks)
        if (b.dim != d) throw std::invalid_argument("write_field: blocks must share one dimension");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    std::ostringstream head;
    head << "dims=" << d << " blocks=" << f.blocks.size() << " N=";
    for (std::size_t i = 0; i < f.blocks.size(); ++i) head << (i ? "," : "") << f.blocks[i].points;
    head << " R=";
    for (std::size_t i = 0; i < f.blocks.size(); ++i)
        head << (i ? "," : "") << format_double(f.blocks[i].half_width);
    head << "\n";
    out << head.str();
    std::vector<double> raw(2 * f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        raw[2 * j] = f.data[j].real();
        raw[2 * j + 1] = f.data[j].imag();
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else cur += c;
    }
    out.push_back(cur);
    return out;
}

} // namespace

SampledField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    std::string header;
    std::getline(in, header);
    int d = 0;
    std::size_t blocks = 0;
    std::vector<int> ns;
    std::vector<double> rs;
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("read_field: malformed header");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "dims") d = std::stoi(val);
        else if (key == "blocks") blocks = static_cast<std::size_t>(std::stoul(val));
        else if (key == "N")
            for (const auto& v : split_commas(val)) ns.push_back(std::stoi(v));
        else if (key == "R")
            for (const auto& v : split_commas(val)) rs.push_back(std::stod(v));
    }
    if (d < 1 || blocks == 0 || ns.size() != blocks || rs.size() != blocks)
        throw std::runtime_error("read_field: malformed header: " + header);
    std::vector<UniformGrid> gs;
    for (std::size_t i = 0; i < blocks; ++i) gs.emplace_back(d, ns[i], rs[i]);
    SampledField f(gs);
    std::vector<double> raw(2 * f.size());
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_field: truncated data in " + path);
    for (std::size_t j = 0; j < f.size(); ++j) f.data[j] = cplx{raw[2 * j], raw[2 * j + 1]};
    return f;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::variant<std::string, double, long>>& cells) {
    if (columns_ && cells.size() != columns_)
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ",";
        if (std::holds_alternative<std::string>(cells[i])) out_ << std::get<std::string>(cells[i]);
        else if (std::holds_alternative<double>(cells[i]))
            out_ << format_double(std::get<double>(cells[i]));
        else out_ << std::get<long>(cells[i]);
    }
    out_ << "\n";
}

void CsvWriter::manifest(const std::map<std::string, std::string>& fields) {
    out_ << "#manifest:";
    for (const auto& [k, v] : fields) out_ << " " << k << "=" << v;
    out_ << "\n";
    out_.flush();
}

} // namespace tfio
