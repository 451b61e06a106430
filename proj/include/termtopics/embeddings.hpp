#ifndef TERMTOPICS_EMBEDDINGS_HPP
#define TERMTOPICS_EMBEDDINGS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

namespace termtopics {

/// Word vectors of one fixed dimension, read from the fastText/word2vec text
/// format (`word v1 ... vD`, optional `count dim` header line).
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(Eigen::Index dimension) : dimension_(dimension) {}

    /// When `vocabulary` is given, only those words are kept.
    static EmbeddingTable read(std::istream& in, const std::unordered_set<std::string>* vocabulary = nullptr);
    static EmbeddingTable load(const std::filesystem::path& path,
                               const std::unordered_set<std::string>* vocabulary = nullptr);

    Eigen::Index dimension() const { return dimension_; }
    std::size_t size() const { return index_.size(); }
    bool empty() const { return index_.empty(); }

    /// Throws ValidationError on a dimension mismatch; a repeated word keeps the first vector.
    void add(const std::string& word, const Eigen::Ref<const Eigen::VectorXd>& vector);

    /// Exact word, then its case-folded form.
    std::optional<Eigen::VectorXd> lookup(const std::string& word) const;

    /// Vector for a (possibly multiword) term: the full phrase (space or
    /// underscore joined) if present, else the mean of the member words found.
    std::optional<Eigen::VectorXd> term_vector(const std::string& term) const;

private:
    Eigen::Index dimension_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;
};

} // namespace termtopics

#endif // TERMTOPICS_EMBEDDINGS_HPP
