#include "termtopics/jobs.hpp"

#include "termtopics/errors.hpp"

namespace termtopics {

std::string_view to_string(JobState state) {
    switch (state) {
    case JobState::Queued:
        return "queued";
    case JobState::Running:
        return "running";
    case JobState::Done:
        return "done";
    case JobState::Failed:
        return "failed";
    }
    return "unknown";
}

class JobManager::Context : public JobContext {
public:
    Context(JobManager& owner, std::string id) : owner_(owner), id_(std::move(id)) {}

    void set_stage(std::string_view stage) override {
        std::lock_guard lock(owner_.mutex_);
        owner_.jobs_.at(id_).stage = std::string(stage);
        owner_.changed_.notify_all();
    }

private:
    JobManager& owner_;
    std::string id_;
};

JobManager::~JobManager() {
    std::vector<std::jthread> threads;
    {
        std::lock_guard lock(mutex_);
        threads.swap(threads_);
    }
    threads.clear(); // joins
}

void JobManager::transition(const std::string& job_id, JobState state, std::string error) {
    std::lock_guard lock(mutex_);
    JobStatus& job = jobs_.at(job_id);
    const bool finished = job.state == JobState::Done || job.state == JobState::Failed;
    if (finished || static_cast<int>(state) <= static_cast<int>(job.state)) {
        return;
    }
    job.state = state;
    job.history.push_back(state);
    if (!error.empty()) {
        job.error = std::move(error);
    }
    changed_.notify_all();
}

std::string JobManager::submit(std::string kind, std::string corpus_id, std::string model_id, Work work) {
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = "job-" + std::to_string(next_id_++);
        JobStatus job;
        job.job_id = id;
        job.kind = std::move(kind);
        job.corpus_id = std::move(corpus_id);
        job.model_id = std::move(model_id);
        job.history.push_back(JobState::Queued);
        jobs_.emplace(id, std::move(job));
    }
    auto run = [this, id, work = std::move(work)] {
        transition(id, JobState::Running);
        Context context(*this, id);
        try {
            work(context);
            transition(id, JobState::Done);
        } catch (const std::exception& e) {
            transition(id, JobState::Failed, e.what());
        } catch (...) {
            transition(id, JobState::Failed, "unknown error");
        }
    };
    std::lock_guard lock(mutex_);
    threads_.emplace_back(std::move(run));
    return id;
}

std::string JobManager::record_done(std::string kind, std::string corpus_id, std::string model_id) {
    std::lock_guard lock(mutex_);
    std::string id = "job-" + std::to_string(next_id_++);
    JobStatus job;
    job.job_id = id;
    job.kind = std::move(kind);
    job.corpus_id = std::move(corpus_id);
    job.model_id = std::move(model_id);
    job.state = JobState::Done;
    job.history = {JobState::Queued, JobState::Running, JobState::Done};
    jobs_.emplace(id, std::move(job));
    return id;
}

JobStatus JobManager::status(const std::string& job_id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) {
        throw NotFoundError("unknown job '" + job_id + "'");
    }
    return it->second;
}

JobStatus JobManager::wait(const std::string& job_id) const {
    std::unique_lock lock(mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) {
        throw NotFoundError("unknown job '" + job_id + "'");
    }
    changed_.wait(lock, [&] { return it->second.state == JobState::Done || it->second.state == JobState::Failed; });
    return it->second;
}

} // namespace termtopics
