#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmca/errors.hpp"
#include "sbmca/types.hpp"

namespace sbmca {

// Matrix of unit-norm atoms plus per-atom provenance labels.
struct Dictionary {
    Matrix atoms;                    // m x d
    std::vector<std::string> labels; // size d
    std::string id;

    Index rows() const { return atoms.rows(); }
    Index size() const { return atoms.cols(); }
};

namespace detail {

inline Vector circular_shift(const Vector& v, long s) {
    const Index m = v.size();
    long r = s % m;
    if (r < 0) r += m;
    Vector out(m);
    for (Index t = 0; t < m; ++t) out((t + r) % m) = v(t);
    return out;
}

} // namespace detail

// Atoms are circular shifts of the prototypes, normalized to unit norm.
// Column order: prototype-major, then shift in the given order.
inline Dictionary build_pulse_dictionary(const std::vector<Vector>& prototypes,
                                         const std::vector<long>& shifts) {
    if (prototypes.empty() || shifts.empty())
        throw std::invalid_argument("build_pulse_dictionary: empty prototypes or shifts");
    const Index m = prototypes.front().size();
    std::set<long> seen;
    for (long s : shifts)
        if (!seen.insert(s).second)
            throw std::invalid_argument("build_pulse_dictionary: duplicate shift");

    Dictionary D;
    D.id = "pulse";
    D.atoms.resize(m, static_cast<Index>(prototypes.size() * shifts.size()));
    Index col = 0;
    for (std::size_t p = 0; p < prototypes.size(); ++p) {
        const Vector& proto = prototypes[p];
        if (proto.size() != m)
            throw std::invalid_argument("build_pulse_dictionary: prototype length mismatch");
        const double norm = proto.norm();
        if (norm == 0.0)
            throw std::invalid_argument("build_pulse_dictionary: zero-norm prototype");
        for (long s : shifts) {
            Vector atom = detail::circular_shift(proto, s);
            D.atoms.col(col) = atom / norm;
            D.labels.push_back("proto" + std::to_string(p) + ":shift" + std::to_string(s));
            ++col;
        }
    }
    return D;
}

// Orthonormal DCT-II basis: atom k entry t = c_k * cos(pi*(t+0.5)*k/m).
inline Dictionary dct_dictionary(Index m) {
    if (m <= 0) throw std::invalid_argument("dct_dictionary: m must be positive");
    Dictionary D;
    D.id = "dct";
    D.atoms.resize(m, m);
    const double pi = 3.14159265358979323846;
    for (Index k = 0; k < m; ++k) {
        const double c = (k == 0) ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
        for (Index t = 0; t < m; ++t)
            D.atoms(t, k) = c * std::cos(pi * (t + 0.5) * k / m);
        D.labels.push_back("dct-" + std::to_string(k));
    }
    return D;
}

inline Dictionary identity_dictionary(Index m) {
    if (m <= 0) throw std::invalid_argument("identity_dictionary: m must be positive");
    Dictionary D;
    D.id = "identity";
    D.atoms = Matrix::Identity(m, m);
    for (Index k = 0; k < m; ++k)
        D.labels.push_back("identity-" + std::to_string(k));
    return D;
}

// Concatenate atoms side by side; labels are kept verbatim.
inline Dictionary concat(const Dictionary& a, const Dictionary& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("concat: dictionary row mismatch");
    Dictionary D;
    D.id = a.id + "+" + b.id;
    D.atoms.resize(a.rows(), a.size() + b.size());
    D.atoms.leftCols(a.size()) = a.atoms;
    D.atoms.rightCols(b.size()) = b.atoms;
    D.labels = a.labels;
    D.labels.insert(D.labels.end(), b.labels.begin(), b.labels.end());
    return D;
}

// --- binary save/load, bit-exact round trip -------------------------------

inline void save_dictionary(const Dictionary& D, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write("SBDICT1\n", 8);
    const std::int64_t m = D.rows(), d = D.size();
    f.write(reinterpret_cast<const char*>(&m), sizeof m);
    f.write(reinterpret_cast<const char*>(&d), sizeof d);
    auto write_str = [&f](const std::string& s) {
        const std::int64_t len = static_cast<std::int64_t>(s.size());
        f.write(reinterpret_cast<const char*>(&len), sizeof len);
        f.write(s.data(), len);
    };
    write_str(D.id);
    for (const auto& l : D.labels) write_str(l);
    f.write(reinterpret_cast<const char*>(D.atoms.data()),
            static_cast<std::streamsize>(sizeof(double)) * m * d);
    if (!f) throw IoError("write failed: " + path);
}

inline Dictionary load_dictionary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "SBDICT1\n")
        throw IoError("not a dictionary file: " + path);
    std::int64_t m = 0, d = 0;
    f.read(reinterpret_cast<char*>(&m), sizeof m);
    f.read(reinterpret_cast<char*>(&d), sizeof d);
    if (!f || m <= 0 || d <= 0) throw IoError("corrupt dictionary header: " + path);
    auto read_str = [&f, &path]() {
        std::int64_t len = 0;
        f.read(reinterpret_cast<char*>(&len), sizeof len);
        if (!f || len < 0) throw IoError("corrupt dictionary string: " + path);
        std::string s(static_cast<std::size_t>(len), '\0');
        f.read(s.data(), len);
        return s;
    };
    Dictionary D;
    D.id = read_str();
    for (std::int64_t k = 0; k < d; ++k) D.labels.push_back(read_str());
    D.atoms.resize(m, d);
    f.read(reinterpret_cast<char*>(D.atoms.data()),
           static_cast<std::streamsize>(sizeof(double)) * m * d);
    if (!f) throw IoError("truncated dictionary file: " + path);
    return D;
}

} // namespace sbmca
