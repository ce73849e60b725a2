// EmbeddingSet: an ordered collection of fixed-dimension feature vectors with
// a probability weight per vector. This is the discrete distribution that the
// transport solvers couple; weights default to uniform.

#ifndef MHMS_EMBEDDING_SET_HPP
#define MHMS_EMBEDDING_SET_HPP

#include <Eigen/Core>

#include "mhms/errors.hpp"

namespace mhms {

inline constexpr double kWeightSumTolerance = 1e-9;

class EmbeddingSet {
public:
    /// Rows of `vectors` are the embeddings; weights are uniform 1/K.
    explicit EmbeddingSet(Eigen::MatrixXd vectors)
        : EmbeddingSet(std::move(vectors), Eigen::VectorXd()) {}

    EmbeddingSet(Eigen::MatrixXd vectors, Eigen::VectorXd weights)
        : vectors_(std::move(vectors)), weights_(std::move(weights)) {
        if (vectors_.rows() < 1 || vectors_.cols() < 1) {
            throw InvalidArgument("EmbeddingSet requires at least one vector of dimension >= 1");
        }
        if (!vectors_.allFinite()) {
            throw NonFinite("EmbeddingSet vectors contain NaN or infinity");
        }
        if (weights_.size() == 0) {
            weights_ = Eigen::VectorXd::Constant(vectors_.rows(), 1.0 / static_cast<double>(vectors_.rows()));
        }
        if (weights_.size() != vectors_.rows()) {
            throw ShapeMismatch("EmbeddingSet weight count does not match vector count");
        }
        if ((weights_.array() < 0.0).any()) {
            throw DegenerateMarginal("EmbeddingSet weights must be nonnegative");
        }
        if (std::abs(weights_.sum() - 1.0) > kWeightSumTolerance) {
            throw DegenerateMarginal("EmbeddingSet weights must sum to 1 within 1e-9");
        }
    }

    long count() const noexcept { return vectors_.rows(); }
    long dimension() const noexcept { return vectors_.cols(); }

    const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    Eigen::VectorXd vector(long index) const { return vectors_.row(index).transpose(); }

private:
    Eigen::MatrixXd vectors_;
    Eigen::VectorXd weights_;
};

}  // namespace mhms

#endif  // MHMS_EMBEDDING_SET_HPP
