#ifndef TERMTOPICS_RANK_PARAMS_HPP
#define TERMTOPICS_RANK_PARAMS_HPP

namespace termtopics {

/// Tuning of the per-document term ranking and thinning.
struct RankingParams {
    double alpha = 0.9;        ///< probability of following a co-occurrence edge
    double beta = -0.9;        ///< exponent of the (1 + pos) position weight
    int window = 11;           ///< co-occurrence window size, odd
    double thin_percent = 33.3; ///< share of a document's terms kept after ranking

    bool operator==(const RankingParams&) const = default;

    /// Throws ValidationError when a field is out of range.
    void validate() const;
};

} // namespace termtopics

#endif // TERMTOPICS_RANK_PARAMS_HPP
