#pragma once

#include <stdexcept>
#include <string>

namespace leaguetrend {

enum class Errc {
    // datasource
    NetworkUnavailable,
    RemoteNotFound,
    CacheCorrupt,
    ManifestMalformed,
    // ingest
    HeaderMissing,
    EmptyFile,
    MixedSeasons,
    RoundOutOfRange,
    // regression
    InsufficientData,
    SingularFit,
    UnknownGrouping,
    // rankmetrics
    TeamSetMismatch,
    // stats
    DegenerateSample,
    TooFewSamples,
    LengthMismatch,
    ZeroVariance,
    // cli
    TeamNotFound,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NetworkUnavailable: return "NetworkUnavailable";
    case Errc::RemoteNotFound: return "RemoteNotFound";
    case Errc::CacheCorrupt: return "CacheCorrupt";
    case Errc::ManifestMalformed: return "ManifestMalformed";
    case Errc::HeaderMissing: return "HeaderMissing";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MixedSeasons: return "MixedSeasons";
    case Errc::RoundOutOfRange: return "RoundOutOfRange";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::SingularFit: return "SingularFit";
    case Errc::UnknownGrouping: return "UnknownGrouping";
    case Errc::TeamSetMismatch: return "TeamSetMismatch";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::TeamNotFound: return "TeamNotFound";
    }
    return "UnknownError";
}

}  // namespace leaguetrend
