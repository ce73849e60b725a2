// Error types used across the engine. Every failure carries a stable
// machine-readable code next to the human-readable message; the CLI maps
// validation failures to exit code 1 and runtime failures to exit code 2.

#ifndef MHMS_ERRORS_HPP
#define MHMS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mhms {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& m) : Error("invalid-argument", m) {}
};

// --- geometry / linear algebra ---
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& m) : Error("dimension-mismatch", m) {}
};
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& m) : Error("shape-mismatch", m) {}
};
struct ZeroNormVector : Error {
    ZeroNormVector(const std::string& m, long index) : Error("zero-norm-vector", m), index(index) {}
    long index;
};
struct NonFinite : Error {
    explicit NonFinite(const std::string& m) : Error("non-finite", m) {}
};

// --- transport solvers ---
struct DegenerateMarginal : Error {
    explicit DegenerateMarginal(const std::string& m) : Error("degenerate-marginal", m) {}
};
struct NumericUnderflow : Error {
    explicit NumericUnderflow(const std::string& m) : Error("numeric-underflow", m) {}
};
struct TooLarge : Error {
    explicit TooLarge(const std::string& m) : Error("too-large", m) {}
};

// --- segmentation ---
struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& m) : Error("index-out-of-range", m) {}
};
struct EmptyWindow : Error {
    explicit EmptyWindow(const std::string& m) : Error("empty-window", m) {}
};
struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& m) : Error("length-mismatch", m) {}
};
struct InvalidPolicy : Error {
    explicit InvalidPolicy(const std::string& m) : Error("invalid-policy", m) {}
};

// --- summarization ---
struct WeightsNotNormalized : Error {
    explicit WeightsNotNormalized(const std::string& m) : Error("weights-not-normalized", m) {}
};
struct KTooLarge : Error {
    explicit KTooLarge(const std::string& m) : Error("k-too-large", m) {}
};
struct AdapterUnavailable : Error {
    explicit AdapterUnavailable(const std::string& m) : Error("adapter-unavailable", m) {}
};
struct AdapterProtocolError : Error {
    explicit AdapterProtocolError(const std::string& m) : Error("adapter-protocol-error", m) {}
};

// --- alignment / pipeline ---
struct MissingCandidates : Error {
    explicit MissingCandidates(const std::string& m) : Error("missing-candidates", m) {}
};
struct MissingModality : Error {
    explicit MissingModality(const std::string& m) : Error("missing-modality", m) {}
};

// --- metrics ---
struct EmptyReference : Error {
    explicit EmptyReference(const std::string& m) : Error("empty-reference", m) {}
};
struct KExceedsN : Error {
    explicit KExceedsN(const std::string& m) : Error("k-exceeds-n", m) {}
};
struct NoRelevantItems : Error {
    explicit NoRelevantItems(const std::string& m) : Error("no-relevant-items", m) {}
};

// --- file formats ---
struct BadMagic : Error {
    explicit BadMagic(const std::string& m) : Error("bad-magic", m) {}
};
struct TruncatedPayload : Error {
    explicit TruncatedPayload(const std::string& m) : Error("truncated-payload", m) {}
};
struct VersionUnsupported : Error {
    explicit VersionUnsupported(const std::string& m) : Error("version-unsupported", m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io-error", m) {}
};

/// Manifest validation reports every violation at once.
struct ManifestIssue {
    std::string code;
    std::string message;
};

class ManifestError : public Error {
public:
    explicit ManifestError(std::vector<ManifestIssue> issues)
        : Error("manifest-invalid", render(issues)), issues_(std::move(issues)) {}

    const std::vector<ManifestIssue>& issues() const noexcept { return issues_; }

private:
    static std::string render(const std::vector<ManifestIssue>& issues) {
        std::string out = "manifest validation failed:";
        for (const auto& issue : issues) {
            out += "\n  [" + issue.code + "] " + issue.message;
        }
        return out;
    }

    std::vector<ManifestIssue> issues_;
};

}  // namespace mhms

#endif  // MHMS_ERRORS_HPP
