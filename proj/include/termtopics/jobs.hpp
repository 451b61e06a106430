#ifndef TERMTOPICS_JOBS_HPP
#define TERMTOPICS_JOBS_HPP

#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace termtopics {

enum class JobState { Queued, Running, Done, Failed };

std::string_view to_string(JobState state);

struct JobStatus {
    std::string job_id;
    std::string kind;
    JobState state = JobState::Queued;
    std::string stage;
    std::string error;
    std::string corpus_id;
    std::string model_id;
    std::vector<JobState> history; ///< every state entered, in order
};

/// Handed to a running job for progress reporting.
class JobContext {
public:
    virtual ~JobContext() = default;
    virtual void set_stage(std::string_view stage) = 0;
};

/// Runs each submitted job on its own thread. States only move forward:
/// queued -> running -> done | failed.
class JobManager {
public:
    JobManager() = default;
    JobManager(const JobManager&) = delete;
    JobManager& operator=(const JobManager&) = delete;
    /// Joins every job thread.
    ~JobManager();

    using Work = std::function<void(JobContext&)>;

    std::string submit(std::string kind, std::string corpus_id, std::string model_id, Work work);
    /// A job that is already finished (e.g. a cache hit).
    std::string record_done(std::string kind, std::string corpus_id, std::string model_id);

    /// Throws NotFoundError.
    JobStatus status(const std::string& job_id) const;
    /// Blocks until the job is done or failed.
    JobStatus wait(const std::string& job_id) const;

private:
    class Context;

    void transition(const std::string& job_id, JobState state, std::string error = {});

    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::map<std::string, JobStatus> jobs_;
    std::size_t next_id_ = 1;
    std::vector<std::jthread> threads_;
};

} // namespace termtopics

#endif // TERMTOPICS_JOBS_HPP
