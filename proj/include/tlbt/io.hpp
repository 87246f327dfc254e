#ifndef TLBT_IO_HPP
#define TLBT_IO_HPP

#include <filesystem>
#include <string>

#include "tlbt/model.hpp"

namespace tlbt::io
{

namespace fs = std::filesystem;

/// Matrix Market reader. Accepts real, integer and pattern fields with
/// general, symmetric or skew-symmetric storage, in coordinate or array form.
Sparse read_matrix_market_sparse(const fs::path& path);
Matrix read_matrix_market_dense(const fs::path& path);

/// Writers print 17 significant digits so reading back is bit-exact.
void write_matrix_market(const fs::path& path, const Matrix& m);
void write_matrix_market(const fs::path& path, const Sparse& m);

/// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const fs::path& path, const std::string& contents);

std::string format_double(double v); // %.17g

/// System described by a JSON sidecar:
/// { "name", "type": standard|generalized|descriptor,
///   "matrices": {"A","B","C","M","D"} (paths relative to the sidecar),
///   "n_f", "spd_mass", "alpha_shift", "symmetric" }
struct LoadedSystem
{
    std::string name;
    std::string type;
    model::System system;
    double alpha_shift = 0.0; // already applied to A
    bool symmetric = false;
};

LoadedSystem load_system(const fs::path& sidecar);

/// Writes A.mtx, B.mtx, C.mtx, D.mtx (and M.mtx for generalized systems) plus
/// system.json into dir.
void save_system(const fs::path& dir, const std::string& name, const model::StandardSystem& sys);
void save_system(const fs::path& dir, const std::string& name, const model::GeneralizedSystem& sys);

} // namespace tlbt::io

#endif
