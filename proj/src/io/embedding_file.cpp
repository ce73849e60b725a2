#include "mhms/io/embedding_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace mhms::io {

namespace {

constexpr char kMagic[4] = {'M', 'H', 'E', 'B'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back((v >> shift) & 0xFF);
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int shift = 0; shift < 64; shift += 8) out.push_back((v >> shift) & 0xFF);
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path.string());

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < kHeaderBytes) {
        throw TruncatedPayload("embedding file shorter than its header: " + path.string());
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw BadMagic("embedding file has wrong magic: " + path.string());
    }
    const std::uint32_t version = get_u32(bytes.data() + 4);
    if (version != kEmbeddingFormatVersion) {
        throw VersionUnsupported("embedding format version " + std::to_string(version) +
                                 " unsupported: " + path.string());
    }
    const std::uint64_t count = get_u64(bytes.data() + 8);
    const std::uint64_t dim = get_u64(bytes.data() + 16);
    const std::uint64_t expected = count * dim * 4;
    if (bytes.size() - kHeaderBytes != expected) {
        throw TruncatedPayload("embedding payload is " +
                               std::to_string(bytes.size() - kHeaderBytes) + " bytes, expected " +
                               std::to_string(expected) + ": " + path.string());
    }

    Eigen::MatrixXd values(static_cast<long>(count), static_cast<long>(dim));
    const unsigned char* p = bytes.data() + kHeaderBytes;
    for (std::uint64_t r = 0; r < count; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            values(static_cast<long>(r), static_cast<long>(c)) =
                static_cast<double>(std::bit_cast<float>(get_u32(p)));
            p += 4;
        }
    }
    return values;
}

void write_matrix(const Eigen::MatrixXd& values, const std::filesystem::path& path) {
    std::vector<unsigned char> bytes;
    bytes.reserve(kHeaderBytes + static_cast<std::size_t>(values.size()) * 4);
    bytes.insert(bytes.end(), kMagic, kMagic + 4);
    put_u32(bytes, kEmbeddingFormatVersion);
    put_u64(bytes, static_cast<std::uint64_t>(values.rows()));
    put_u64(bytes, static_cast<std::uint64_t>(values.cols()));
    for (long r = 0; r < values.rows(); ++r) {
        for (long c = 0; c < values.cols(); ++c) {
            put_u32(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(values(r, c))));
        }
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open embedding file for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to embedding file: " + path.string());
}

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
    Eigen::MatrixXd values = read_matrix(path);
    if (values.rows() < 1 || values.cols() < 1) {
        throw TruncatedPayload("embedding file is empty: " + path.string());
    }
    return EmbeddingSet(std::move(values));
}

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
    write_matrix(set.vectors(), path);
}

}  // namespace mhms::io
