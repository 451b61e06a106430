#ifndef TERMTOPICS_PARTITION_HPP
#define TERMTOPICS_PARTITION_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace termtopics {

class TermNetwork;

/// Assignment of every vertex to exactly one community; labels are dense.
class Partition {
public:
    Partition() = default;

    /// Relabels arbitrary non-negative labels densely in order of first appearance.
    static Partition from_labels(std::span<const int> labels);
    /// Keeps the given labels; throws ValidationError unless they cover 0..k-1.
    static Partition from_dense(std::vector<int> labels);
    /// Relabels so that community 0 is the largest; ties go to the community
    /// holding the smaller vertex index.
    static Partition by_size(std::span<const int> labels);
    static Partition singletons(Eigen::Index n);
    static Partition whole(Eigen::Index n);

    Eigen::Index size() const { return static_cast<Eigen::Index>(membership_.size()); }
    int community(Eigen::Index v) const { return membership_[static_cast<std::size_t>(v)]; }
    int community_count() const { return count_; }
    const std::vector<int>& membership() const { return membership_; }

    std::vector<std::vector<Eigen::Index>> communities() const;
    std::vector<std::size_t> community_sizes() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<int> membership_;
    int count_ = 0;
};

/// Partition plus the run metadata stored alongside it.
struct PartitionRecord {
    Partition partition;
    double gamma = 1.0;
    std::uint64_t seed = 42;
    double quality = 0.0;
};

/// `# key=value` metadata lines (gamma, seed, quality, community_count)
/// followed by `term\tcommunity_index` per vertex in vertex order.
void write_partition(std::ostream& out, const TermNetwork& net, const PartitionRecord& record);

/// Inverse of write_partition; every network vertex must be listed exactly once.
PartitionRecord read_partition(std::istream& in, const TermNetwork& net);

} // namespace termtopics

#endif // TERMTOPICS_PARTITION_HPP
