#include <cstdint>
#include <fstream>

#include "binary_io.hpp"
#include "qtt/badic.hpp"
#include "qtt/format.hpp"
#include "qtt/tensorized.hpp"

namespace qtt {

namespace {
constexpr std::uint8_t kLegendreBasisId = 0;
}

void write_qttf(const TensorizedFunction& tf, const std::string& path) {
    auto os = detail::open_out(path, true);
    os.write("QTTF", 4);
    detail::put_u32(os, static_cast<std::uint32_t>(tf.base()));
    detail::put_u32(os, static_cast<std::uint32_t>(tf.level()));
    detail::put_u32(os, static_cast<std::uint32_t>(tf.space().degree()));
    os.put(static_cast<char>(kLegendreBasisId));
    const double* data = tf.coeffs().data();
    for (std::size_t i = 0; i < tf.elements(); ++i) detail::put_f64(os, data[i]);
    if (!os) throw IoError("write failed: " + path);
}

TensorizedFunction read_qttf(const std::string& path) {
    auto is = detail::open_in(path);
    detail::expect_magic(is, "QTTF", path);
    const auto b = static_cast<int>(detail::get_u32(is, path));
    const auto d = static_cast<int>(detail::get_u32(is, path));
    const auto m = static_cast<int>(detail::get_u32(is, path));
    unsigned char basis = 0;
    detail::read_exact(is, &basis, 1, path);
    if (basis != kLegendreBasisId) {
        throw IoError("unsupported basis id " + std::to_string(basis) + " in " + path);
    }
    auto space = PolySpace::make(m, b);
    TensorizedFunction zero = TensorizedFunction::zeros(space, d);
    CoeffMatrix c = zero.coeffs();
    double* data = c.data();
    for (Eigen::Index i = 0; i < c.size(); ++i) data[i] = detail::get_f64(is, path);
    return {space, d, std::move(c)};
}

void write_coeff_csv(const TensorizedFunction& tf, const std::string& path) {
    auto os = detail::open_out(path, false);
    os << "j,k,value\n";
    const auto& C = tf.coeffs();
    for (Eigen::Index j = 0; j < C.rows(); ++j)
        for (Eigen::Index k = 0; k < C.cols(); ++k)
            os << j << ',' << k << ',' << format_double(C(j, k)) << '\n';
    if (!os) throw IoError("write failed: " + path);
}

void write_rank_csv(const RankProfile& profile, const std::string& path) {
    auto os = detail::open_out(path, false);
    os << "nu,r_nu\n";
    for (std::size_t nu = 0; nu < profile.ranks.size(); ++nu)
        os << nu + 1 << ',' << profile.ranks[nu] << '\n';
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace qtt
