#pragma once

// Counter-based random number streams.
//
// Every stream is identified by (master_seed, lane) where lane =
// (purpose, index, step).  Distinct lanes give statistically independent
// streams, and a stream's output depends only on (master_seed, lane, draw
// order), never on what other streams were consumed before it.  That is what
// makes parallel path simulation bit-reproducible irrespective of the number
// of worker threads: each (path, time-step) owns its own lane.
//
// The generator is Philox 4x32-10 (Salmon, Moraes, Dror, Shaw, "Parallel
// random numbers: as easy as 1, 2, 3", SC'11).  The 128-bit counter holds
// (block, purpose, index, step); the 64-bit key is the master seed.

#include <cstdint>
#include <vector>

namespace jumpsplit {

struct Lane {
    std::uint32_t purpose = 0;
    std::uint32_t index = 0; // e.g. path index j, neuron index, run index
    std::uint32_t step = 0;  // e.g. time-step k
};

// Purpose tags. Keeping them in one enum avoids accidental lane collisions
// between modules.
enum : std::uint32_t {
    LANE_INIT = 1,        // initial draws xi^{d,0}
    LANE_BROWNIAN = 2,    // Brownian increments G_k
    LANE_POISSON = 3,     // Poisson jump counts P_k
    LANE_JUMP = 4,        // jump marks Z_i
    LANE_COMP = 5,        // compensator samples V_i
    LANE_NET_INIT = 6,    // random feature / dense-net initialization
    LANE_RUN_SEED = 7,    // per-run master seeds in sweeps
    LANE_ORACLE = 8,      // oracle estimators
    LANE_STEP_BATCH = 9,  // per-time-step fresh batches (deterministic method)
    LANE_SGD = 10,        // minibatch shuffling / streaming batches
    LANE_CHILD_SEED = 11, // derived child seeds (nested estimators)
    LANE_TEST = 99,       // unit tests
};

// Raw Philox block function, exposed for the known-answer tests.
struct PhiloxBlock {
    std::uint32_t v[4];
};
PhiloxBlock philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2]);

class RngStream {
public:
    RngStream(std::uint64_t master_seed, Lane lane);

    std::uint64_t master_seed() const { return master_seed_; }
    Lane lane() const { return lane_; }

    // Primitive draws
    std::uint64_t next_u64();
    double next_uniform();       // open interval (0,1)
    double next_normal();        // standard normal (Box-Muller, cached pair)

    // Named samplers (see module contract)
    void fill_normal(double* out, std::size_t n);
    std::vector<double> sample_normal(std::size_t n);
    long long sample_poisson(double rate);
    double sample_gamma(double shape, double rate);
    std::vector<double> sample_uniform_sphere(std::size_t d);
    void fill_uniform_sphere(double* out, std::size_t d);
    std::vector<double> sample_uniform_cube(std::size_t d);

private:
    void refill();

    std::uint64_t master_seed_;
    Lane lane_;
    std::uint32_t key_[2];
    std::uint32_t block_ = 0;   // counter word 0
    std::uint32_t buf_[4];
    int buf_pos_ = 4;           // consumed position in buf_ (u32 units)
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

inline RngStream substream(std::uint64_t master_seed, Lane lane) {
    return RngStream(master_seed, lane);
}

// One u64 drawn from a dedicated lane; used to derive independent child
// master seeds for nested contexts (oracle recursion, per-run seeds).
std::uint64_t derive_seed(std::uint64_t master_seed, Lane lane);

} // namespace jumpsplit
