#include "classifly/error.hpp"

namespace classifly {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::MalformedRow: return "MalformedRow";
        case ErrorKind::MalformedFile: return "MalformedFile";
        case ErrorKind::UnsortedInput: return "UnsortedInput";
        case ErrorKind::MixedAircraft: return "MixedAircraft";
        case ErrorKind::InvalidQ: return "InvalidQ";
        case ErrorKind::EmptyGroup: return "EmptyGroup";
        case ErrorKind::EmptyValues: return "EmptyValues";
        case ErrorKind::NoPosition: return "NoPosition";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::DegenerateLabels: return "DegenerateLabels";
        case ErrorKind::TooFewRows: return "TooFewRows";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::MalformedRegistry: return "MalformedRegistry";
        case ErrorKind::MalformedModel: return "MalformedModel";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::InvalidArchetype: return "InvalidArchetype";
    }
    return "Unknown";
}

}  // namespace classifly
