#include <cstdint>
#include <fstream>

#include "binary_io.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

void write_qttt(const TensorTrain& tt, const std::string& path) {
    auto os = detail::open_out(path, true);
    os.write("QTTT", 4);
    detail::put_u32(os, static_cast<std::uint32_t>(tt.base()));
    detail::put_u32(os, static_cast<std::uint32_t>(tt.level()));
    detail::put_u32(os, static_cast<std::uint32_t>(tt.space().degree()));
    for (int r : tt.ranks()) detail::put_u32(os, static_cast<std::uint32_t>(r));
    for (const auto& core : tt.cores())
        for (const auto& s : core.slices)
            for (Eigen::Index a = 0; a < s.rows(); ++a)
                for (Eigen::Index c = 0; c < s.cols(); ++c) detail::put_f64(os, s(a, c));
    const auto& t = tt.tail();
    for (Eigen::Index a = 0; a < t.rows(); ++a)
        for (Eigen::Index c = 0; c < t.cols(); ++c) detail::put_f64(os, t(a, c));
    if (!os) throw IoError("write failed: " + path);
}

TensorTrain read_qttt(const std::string& path) {
    auto is = detail::open_in(path);
    detail::expect_magic(is, "QTTT", path);
    const auto b = static_cast<int>(detail::get_u32(is, path));
    const auto d = static_cast<int>(detail::get_u32(is, path));
    const auto m = static_cast<int>(detail::get_u32(is, path));
    if (b < 2 || d > 64 || m > 64) throw IoError("implausible header in " + path);
    std::vector<Eigen::Index> ranks(static_cast<std::size_t>(d));
    for (auto& r : ranks) {
        r = detail::get_u32(is, path);
        if (r < 1) throw IoError("zero rank in " + path);
    }
    auto space = PolySpace::make(m, b);
    std::vector<TTCore> cores(static_cast<std::size_t>(d));
    Eigen::Index rin = 1;
    for (int nu = 0; nu < d; ++nu) {
        const Eigen::Index rout = ranks[static_cast<std::size_t>(nu)];
        auto& core = cores[static_cast<std::size_t>(nu)];
        for (int i = 0; i < b; ++i) {
            Eigen::MatrixXd s(rin, rout);
            for (Eigen::Index a = 0; a < rin; ++a)
                for (Eigen::Index c = 0; c < rout; ++c) s(a, c) = detail::get_f64(is, path);
            core.slices.push_back(std::move(s));
        }
        rin = rout;
    }
    Eigen::MatrixXd tail(rin, space->dim());
    for (Eigen::Index a = 0; a < tail.rows(); ++a)
        for (Eigen::Index c = 0; c < tail.cols(); ++c) tail(a, c) = detail::get_f64(is, path);
    return {space, std::move(cores), std::move(tail)};
}

}  // namespace qtt
