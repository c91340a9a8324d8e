#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace wrs {

// Receiver for sampler output. Samplers call accept with nondecreasing
// indices; consecutive calls may repeat an index (one call per landing).
// Wrap in CoalescingSink when strictly one call per element is needed.
class SampleSink {
 public:
  virtual ~SampleSink() = default;
  virtual void accept(std::uint64_t index, std::uint64_t multiplicity) = 0;
};

// Multiplicity histogram of a sample, dense (flat vector indexed by
// element) or sparse (hash map holding only selected elements).
class SampleCounts {
 public:
  static SampleCounts make_dense(std::size_t size);
  static SampleCounts make_sparse();

  void add(std::uint64_t index, std::uint64_t multiplicity);

  std::uint64_t total() const noexcept { return total_; }
  bool is_dense() const noexcept { return dense_; }
  std::uint64_t count(std::uint64_t index) const;

  const std::vector<std::uint64_t>& dense_counts() const;
  const std::unordered_map<std::uint64_t, std::uint64_t>& sparse_counts() const;

 private:
  SampleCounts() = default;

  bool dense_ = false;
  std::vector<std::uint64_t> vec_;
  std::unordered_map<std::uint64_t, std::uint64_t> map_;
  std::uint64_t total_ = 0;
};

class DenseCountSink final : public SampleSink {
 public:
  explicit DenseCountSink(std::size_t size);
  void accept(std::uint64_t index, std::uint64_t multiplicity) override;
  const SampleCounts& counts() const noexcept { return counts_; }

 private:
  SampleCounts counts_;
};

class SparseCountSink final : public SampleSink {
 public:
  SparseCountSink();
  void accept(std::uint64_t index, std::uint64_t multiplicity) override;
  const SampleCounts& counts() const noexcept { return counts_; }

 private:
  SampleCounts counts_;
};

// Records the sample as a flat list of indices with repetition, in
// traversal order.
class ArraySink final : public SampleSink {
 public:
  void accept(std::uint64_t index, std::uint64_t multiplicity) override;
  const std::vector<std::uint64_t>& sample() const noexcept { return sample_; }

 private:
  std::vector<std::uint64_t> sample_;
};

// Merges consecutive accepts for the same index into one call on the
// wrapped sink, so downstream sees at most one accept per element. Rejects
// decreasing indices. Flushes on destruction; call flush() to force the
// tail out earlier.
class CoalescingSink final : public SampleSink {
 public:
  explicit CoalescingSink(SampleSink& inner) : inner_(inner) {}
  ~CoalescingSink() override { flush(); }

  void accept(std::uint64_t index, std::uint64_t multiplicity) override;
  void flush();

 private:
  SampleSink& inner_;
  bool pending_ = false;
  std::uint64_t index_ = 0;
  std::uint64_t multiplicity_ = 0;
};

DenseCountSink collect_dense(std::size_t size);
SparseCountSink collect_sparse();
ArraySink collect_array();

}  // namespace wrs
