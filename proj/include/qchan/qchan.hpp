// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qchan/channel.hpp"
#include "qchan/choi.hpp"
#include "qchan/circuit.hpp"
#include "qchan/decomp.hpp"
#include "qchan/errors.hpp"
#include "qchan/experiment.hpp"
#include "qchan/json_io.hpp"
#include "qchan/layout.hpp"
#include "qchan/numkit.hpp"
#include "qchan/qutrit_map.hpp"
#include "qchan/random.hpp"
#include "qchan/tomography.hpp"
