// Binary embedding container shared by shots, frames, sharpness scalars and
// sentence embeddings.
//
// Layout (all little-endian regardless of host):
//   bytes 0..3   magic "MHEB"
//   bytes 4..7   format version, u32 (currently 1)
//   bytes 8..15  row count, u64
//   bytes 16..23 dimension, u64
//   payload      count * dim IEEE-754 binary32 values, row-major
//
// write(read(path)) reproduces the file byte for byte.

#ifndef MHMS_IO_EMBEDDING_FILE_HPP
#define MHMS_IO_EMBEDDING_FILE_HPP

#include <Eigen/Core>
#include <filesystem>

#include "mhms/embedding_set.hpp"

namespace mhms::io {

inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

/// Raw matrix access (doubles promoted exactly from the stored floats).
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);
void write_matrix(const Eigen::MatrixXd& values, const std::filesystem::path& path);

/// EmbeddingSet with uniform weights; rejects empty files.
EmbeddingSet read_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);

}  // namespace mhms::io

#endif  // MHMS_IO_EMBEDDING_FILE_HPP
