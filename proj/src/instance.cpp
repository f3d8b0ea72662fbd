#include "qtsp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

namespace {

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

TspInstance::TspInstance(int n, std::vector<double> dist) : n_(n), dist_(std::move(dist)) {
    if (n_ < 2) throw std::invalid_argument("instance needs at least 2 cities");
    if (dist_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("non-square matrix: expected " + std::to_string(n_) + "x" +
                                    std::to_string(n_) + " entries");
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            double d = dist_[static_cast<std::size_t>(i) * n_ + j];
            if (!std::isfinite(d)) throw std::invalid_argument("non-finite entry");
            if (i == j && d != 0.0)
                throw std::invalid_argument("nonzero diagonal at index " + std::to_string(i));
            if (d < 0.0) throw std::invalid_argument("negative entry at (" + std::to_string(i) +
                                                     "," + std::to_string(j) + ")");
        }
    }
    directed_ = false;
    for (int i = 0; i < n_ && !directed_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (dist_[static_cast<std::size_t>(i) * n_ + j] !=
                dist_[static_cast<std::size_t>(j) * n_ + i]) {
                directed_ = true;
                break;
            }
}

double TspInstance::max_offdiag() const {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j) m = std::max(m, dist(i, j));
    return m;
}

double TspInstance::min_offdiag() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j) m = std::min(m, dist(i, j));
    return m;
}

std::string TspInstance::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < n_; ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int k = 0; k < n_; ++k) row.push_back(dist(i, k));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    return j.dump();
}

std::string TspInstance::to_csv() const {
    std::ostringstream out;
    for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < n_; ++k) {
            if (k) out << ',';
            out << format_double(dist(i, k));
        }
        out << '\n';
    }
    return out.str();
}

namespace {

TspInstance parse_json_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance JSON parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("dist"))
        throw std::invalid_argument("instance JSON must be {\"n\": int, \"dist\": [[...], ...]}");
    int n = j.at("n").get<int>();
    const auto& rows = j.at("dist");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("non-square matrix: row count does not match n");
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw std::invalid_argument("non-square matrix: column count does not match n");
        for (const auto& v : row) {
            if (!v.is_number()) throw std::invalid_argument("non-numeric entry in dist");
            dist.push_back(v.get<double>());
        }
    }
    return TspInstance(n, std::move(dist));
}

TspInstance parse_csv_instance(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        // allow trailing \r and blank lines
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw std::invalid_argument("instance CSV parse failure at cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty instance file");
    int n = static_cast<int>(rows.size());
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("non-square matrix: CSV rows must have n entries");
        dist.insert(dist.end(), row.begin(), row.end());
    }
    return TspInstance(n, std::move(dist));
}

}  // namespace

TspInstance load_instance(const std::string& text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("empty instance file");
    if (text[first] == '{') return parse_json_instance(text);
    return parse_csv_instance(text);
}

TspInstance random_instance(int n, std::uint64_t seed, double lo, double hi) {
    if (n < 2) throw std::invalid_argument("instance needs at least 2 cities");
    if (!(0.0 <= lo && lo < hi)) throw std::invalid_argument("invalid range: need 0 <= lo < hi");
    Rng rng(seed);
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = rng.uniform(lo, hi);
            dist[static_cast<std::size_t>(i) * n + j] = d;
            dist[static_cast<std::size_t>(j) * n + i] = d;
        }
    return TspInstance(n, std::move(dist));
}

std::pair<TspInstance, NormalizationRecord> normalize_minmax(const TspInstance& inst) {
    double d_min = inst.min_offdiag();
    double d_max = inst.max_offdiag();
    if (d_max == d_min)
        throw std::invalid_argument("constant off-diagonal matrix cannot be min-max normalized");
    int n = inst.n();
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                dist[static_cast<std::size_t>(i) * n + j] =
                    (inst.dist(i, j) - d_min) / (d_max - d_min);
    NormalizationRecord rec;
    rec.d_min = d_min;
    rec.d_max = d_max;
    return {TspInstance(n, std::move(dist)), rec};
}

unsigned __int128 path_count(int n) {
    if (n < 3) throw std::invalid_argument("path_count requires n >= 3");
    // (n-1)!/2 with overflow detection
    unsigned __int128 acc = 1;
    for (int k = 2; k <= n - 1; ++k) {
        unsigned __int128 next = acc * static_cast<unsigned>(k);
        if (next / static_cast<unsigned>(k) != acc)
            throw std::overflow_error("path_count overflows 128 bits for n=" + std::to_string(n));
        acc = next;
    }
    return acc / 2;
}

std::string u128_to_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace qtsp
