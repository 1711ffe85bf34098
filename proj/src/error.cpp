// Copyright 2026 The filreg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "error.hpp"

namespace filreg {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::Ok: return "Ok";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DomainError: return "DomainError";
    case Errc::UnresolvedContact: return "UnresolvedContact";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ClassMismatch: return "ClassMismatch";
    case Errc::NotCanonical: return "NotCanonical";
    case Errc::ConditionViolated: return "ConditionViolated";
    case Errc::TransientNotDecayed: return "TransientNotDecayed";
    case Errc::NoCrossing: return "NoCrossing";
    case Errc::TangentialGraze: return "TangentialGraze";
    case Errc::StepSizeUnderflow: return "StepSizeUnderflow";
    case Errc::NoExit: return "NoExit";
    case Errc::NoRoot: return "NoRoot";
    case Errc::LeftWindow: return "LeftWindow";
    case Errc::SlidingCapture: return "SlidingCapture";
    case Errc::NoReturn: return "NoReturn";
    case Errc::MaxRevolutions: return "MaxRevolutions";
    case Errc::NoBracket: return "NoBracket";
    case Errc::NotConverged: return "NotConverged";
    case Errc::NonPositiveQuantity: return "NonPositiveQuantity";
    case Errc::BadValuation: return "BadValuation";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace filreg
