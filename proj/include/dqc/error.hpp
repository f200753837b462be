#pragma once

#include <stdexcept>
#include <string>

namespace dqc {

// Domain errors. The CLI maps any dqc::Error to exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define DQC_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

DQC_DEFINE_ERROR(UnsupportedGate)
DQC_DEFINE_ERROR(NotRebased)
DQC_DEFINE_ERROR(ParseError)
DQC_DEFINE_ERROR(UnknownModule)
DQC_DEFINE_ERROR(InvalidParams)
DQC_DEFINE_ERROR(InvalidHyperedge)
DQC_DEFINE_ERROR(UnknownVertex)
DQC_DEFINE_ERROR(Infeasible)
DQC_DEFINE_ERROR(NotBipartite)
DQC_DEFINE_ERROR(NonBipartiteConflict)
DQC_DEFINE_ERROR(ConflictDetected)
DQC_DEFINE_ERROR(InfeasibleBound)
DQC_DEFINE_ERROR(TooLarge)
DQC_DEFINE_ERROR(NonFactorizable)

#undef DQC_DEFINE_ERROR

} // namespace dqc
