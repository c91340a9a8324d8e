#include "wrs/sample_sink.hpp"

#include <stdexcept>

namespace wrs {

SampleCounts SampleCounts::make_dense(std::size_t size) {
  SampleCounts c;
  c.dense_ = true;
  c.vec_.assign(size, 0);
  return c;
}

SampleCounts SampleCounts::make_sparse() {
  SampleCounts c;
  c.dense_ = false;
  return c;
}

void SampleCounts::add(std::uint64_t index, std::uint64_t multiplicity) {
  if (multiplicity == 0) return;
  if (dense_) {
    if (index >= vec_.size())
      throw std::out_of_range("sample index outside dense count range");
    vec_[index] += multiplicity;
  } else {
    map_[index] += multiplicity;
  }
  total_ += multiplicity;
}

std::uint64_t SampleCounts::count(std::uint64_t index) const {
  if (dense_) return index < vec_.size() ? vec_[index] : 0;
  auto it = map_.find(index);
  return it == map_.end() ? 0 : it->second;
}

const std::vector<std::uint64_t>& SampleCounts::dense_counts() const {
  if (!dense_) throw std::logic_error("counts are sparse");
  return vec_;
}

const std::unordered_map<std::uint64_t, std::uint64_t>&
SampleCounts::sparse_counts() const {
  if (dense_) throw std::logic_error("counts are dense");
  return map_;
}

DenseCountSink::DenseCountSink(std::size_t size)
    : counts_(SampleCounts::make_dense(size)) {}

void DenseCountSink::accept(std::uint64_t index, std::uint64_t multiplicity) {
  counts_.add(index, multiplicity);
}

SparseCountSink::SparseCountSink() : counts_(SampleCounts::make_sparse()) {}

void SparseCountSink::accept(std::uint64_t index, std::uint64_t multiplicity) {
  counts_.add(index, multiplicity);
}

void ArraySink::accept(std::uint64_t index, std::uint64_t multiplicity) {
  for (std::uint64_t i = 0; i < multiplicity; ++i) sample_.push_back(index);
}

void CoalescingSink::accept(std::uint64_t index, std::uint64_t multiplicity) {
  if (multiplicity == 0) return;
  if (pending_ && index == index_) {
    multiplicity_ += multiplicity;
    return;
  }
  if (pending_ && index < index_)
    throw std::logic_error("sample indices must be nondecreasing");
  flush();
  pending_ = true;
  index_ = index;
  multiplicity_ = multiplicity;
}

void CoalescingSink::flush() {
  if (!pending_) return;
  pending_ = false;
  inner_.accept(index_, multiplicity_);
}

DenseCountSink collect_dense(std::size_t size) { return DenseCountSink(size); }
SparseCountSink collect_sparse() { return SparseCountSink(); }
ArraySink collect_array() { return ArraySink(); }

}  // namespace wrs
