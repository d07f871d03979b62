// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Experiment front end: configuration, tau sweeps, bound tables, CSV and
//! SVG emission. The binary `qitime` wraps these modules; they are public
//! so integration tests can drive sweeps in-process.

pub mod config;
pub mod csv_io;
pub mod report;
pub mod svg;
pub mod sweep;
