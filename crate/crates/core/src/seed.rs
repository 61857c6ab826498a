//! The shipped catalog: 34 authenticators and 33 techniques.
//!
//! Most entries carry their fundamental facets only and are marked
//! [`ClassificationStatus::Partial`]. The PIN and touch-interaction
//! authenticators and the context-aware touch technique are fully classified.

use std::collections::BTreeMap;

use crate::catalog::CatalogDocument;
use crate::facet_model::FacetAssignment;
use crate::report::Rule;
use crate::schemes::{
    facets, AuthenticatorEntry, ClassificationStatus, Employment, Reference, TechniqueEntry, Waiver,
};

/// Lowercase kebab slug of a display name.
pub fn slugify(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') && !out.is_empty() {
            out.push('-');
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    out
}

fn seed_reference() -> Reference {
    Reference {
        citation: "Seed catalog of authenticators and AuthN techniques, classified by fundamental facets"
            .to_owned(),
        ..Reference::default()
    }
}

// (name, Authentication Factor path, description)
const AUTHENTICATORS: &[(&str, &str, &str)] = &[
    ("Handwriting features", "inherence-based.behavioral", "Motion features of characters written in the air."),
    ("Keystroke rhythm", "inherence-based.behavioral", "Timing between key presses while typing free text."),
    ("Hand micro-movement patterns", "inherence-based.behavioral", "Small involuntary hand movements captured by motion sensors."),
    ("Touch-interaction behavior", "inherence-based.behavioral", "Touch rhythm, gesture habits and keystroke dynamics on a touch screen."),
    ("Vertical foot acceleration patterns", "inherence-based.behavioral", "Vertical acceleration of the foot while walking."),
    ("Facial feature patterns", "inherence-based.physiological", "Geometry and texture of the face."),
    ("Fingerprint features", "inherence-based.physiological", "Ridge and minutiae structure of a fingerprint."),
    ("Physiological hand features", "inherence-based.physiological", "Shape and dimensions of the hand."),
    ("Heartbeat patterns", "inherence-based.physiological", "Cardiac motion sensed by millimeter-wave radar."),
    ("Brain activity patterns", "inherence-based.physiological", "EEG signals recorded by a mobile headset."),
    ("Photoplethysmogram (PPG) pulse patterns", "inherence-based.physiological", "Blood volume pulse measured optically by a wearable."),
    ("Pulse Active Ratio (PAR) patterns", "inherence-based.physiological", "Pulse active ratio features extracted from an ECG."),
    ("Iris patterns", "inherence-based.physiological", "Texture of the iris."),
    ("Group signature certificate", "possession-based.digital", "Credential that signs on behalf of a group without revealing the member."),
    ("Private cryptographic key with digital certificate", "possession-based.digital", "Private key bound to an identity by a certificate authority."),
    ("Initialization key", "possession-based.digital", "Shared seed from which one-time passwords are generated in software."),
    ("Private cryptographic key", "possession-based.digital", "Device-bound private key of a public-key credential."),
    ("Unique carrier frequency offset characteristics", "possession-based.physical", "Radio carrier frequency offset specific to one transmitter."),
    ("DRAM chip initialization patterns", "possession-based.physical", "Start-up values of DRAM cells used as a physically unclonable function."),
    ("Hardware OTP token", "possession-based.physical", "Dedicated device that displays one-time passwords."),
    ("Smart card", "possession-based.physical", "Chip card holding a protected credential."),
    ("RFID tag", "possession-based.physical", "Low-cost tag answering a reader's challenge."),
    ("Spatio-temporal graphical password", "knowledge-based.associative", "Sequence of image click points entered with timing intervals."),
    ("Gaze password", "knowledge-based.associative", "Password entered by following moving targets with the eyes."),
    ("Textual password", "knowledge-based.free-recall", "Secret character string chosen by the subject."),
    ("PIN", "knowledge-based.free-recall", "Personal identification number."),
    ("Hand vein pattern", "inherence-based.physiological", "Vein layout under the skin of the hand."),
    ("Knuckle shape", "inherence-based.physiological", "Creases and contour of the finger knuckles."),
    ("Neuromuscular biometrics", "inherence-based.physiological", "Muscle activation signals recorded while entering a password."),
    ("Facial features", "inherence-based.physiological", "Face samples captured alongside voice samples."),
    ("Voice features", "inherence-based.behavioral", "Spectral characteristics of the speaking voice."),
    ("Teeth image", "inherence-based.physiological", "Photograph of the front teeth."),
    ("Temporal pattern", "inherence-based.behavioral", "Timing of a rhythm tapped by the subject."),
    ("Behavioral features of rhythm input", "inherence-based.behavioral", "How the subject physically performs the tapped rhythm."),
];

// (name, Authenticator Employment path, Factor, employed authenticators in order, description)
const TECHNIQUES: &[(&str, &str, &str, &[&str], &str)] = &[
    ("Air Handwriting Authentication", "single", "inherence-based", &["Handwriting features"], "Verifies a signature written in the air."),
    ("Free-text Keystroke Rhythm Authentication", "single", "inherence-based", &["Keystroke rhythm"], "Verifies typing rhythm on arbitrary text."),
    ("Hand Micro-Movement Authentication", "single", "inherence-based", &["Hand micro-movement patterns"], "Verifies micro-movements of the hand holding a device."),
    ("Touch Interaction Behavior Authentication", "single", "inherence-based", &["Touch-interaction behavior"], "Verifies how the subject interacts with a touch screen."),
    ("Vertical Acceleration Gait Authentication", "single", "inherence-based", &["Vertical foot acceleration patterns"], "Verifies gait from vertical foot acceleration."),
    ("Face Feature Authentication", "single", "inherence-based", &["Facial feature patterns"], "Verifies facial features against an enrolled template."),
    ("Fingerprint Authentication", "single", "inherence-based", &["Fingerprint features"], "Verifies a scanned fingerprint."),
    ("Hand Physiology Authentication", "single", "inherence-based", &["Physiological hand features"], "Verifies physiological features of the hand."),
    ("Heartprint mmWave Radar Authentication", "single", "inherence-based", &["Heartbeat patterns"], "Verifies heartbeat patterns sensed contactlessly by radar."),
    ("Mobile EEG Authentication", "single", "inherence-based", &["Brain activity patterns"], "Verifies brain activity recorded by a mobile EEG device."),
    ("PPGPass Wearable Authentication", "single", "inherence-based", &["Photoplethysmogram (PPG) pulse patterns"], "Verifies PPG pulse patterns from a wearable."),
    ("Pulse Active Ratio (PAR) Electrocardiogram (ECG) Authentication", "single", "inherence-based", &["Pulse Active Ratio (PAR) patterns"], "Verifies ECG pulse active ratio features."),
    ("User-Specific Iris Authentication", "single", "inherence-based", &["Iris patterns"], "Verifies iris patterns with user-specific parameters."),
    ("Anonymous Group Signature Authentication for Vehicular Networks", "single", "possession-based", &["Group signature certificate"], "Vehicles prove group membership without revealing identity."),
    ("Certificate Authentication", "single", "possession-based", &["Private cryptographic key with digital certificate"], "Proves possession of a certified private key."),
    ("One-Time Password Authentication (software-based)", "single", "possession-based", &["Initialization key"], "Software generator derives one-time passwords from a seed."),
    ("Passkey Authentication", "single", "possession-based", &["Private cryptographic key"], "Signs a challenge with a device-bound key."),
    ("Carrier Frequency Offset Authentication", "single", "possession-based", &["Unique carrier frequency offset characteristics"], "Identifies a radio transmitter by its frequency offset."),
    ("DRAM Physically Unclonable Function (PUF) Authentication", "single", "possession-based", &["DRAM chip initialization patterns"], "Identifies a device by DRAM start-up patterns."),
    ("One-Time Password Authentication (hardware-based)", "single", "possession-based", &["Hardware OTP Token"], "Hardware token displays one-time passwords."),
    ("Smart Card Authentication", "single", "possession-based", &["Smart card"], "Proves possession of a smart card."),
    ("Ultralight RFID Authentication", "single", "possession-based", &["RFID tag"], "Lightweight challenge-response with an RFID tag."),
    ("Cued Graphical Authentication with Timing Intervals", "single", "knowledge-based", &["Spatio-temporal graphical password"], "Subject reproduces click points on images with timing."),
    ("Dynamic Gaze Password (DyGazePass) Authentication", "single", "knowledge-based", &["Gaze password"], "Subject enters a password by gaze."),
    ("PassWalk Authentication", "single", "knowledge-based", &["Textual password"], "Password entry while walking."),
    ("PIN Authentication", "single", "knowledge-based", &["PIN"], "Subject enters a numeric PIN."),
    ("Text Password Authentication", "single", "knowledge-based", &["Textual password"], "Subject enters a textual password."),
    ("Hand Vein-Knuckle Authentication", "multi.parallel", "inherence-based", &["Hand vein pattern", "Knuckle shape"], "Fuses hand vein and knuckle features."),
    ("Neuromuscular Password Authentication", "multi.parallel", "multi-factor", &["Textual password", "Neuromuscular biometrics"], "Checks the password and the muscle signals of typing it."),
    ("Multi-Sample Multi-Source Biometric Authentication", "multi.parallel", "multi-factor", &["Facial features", "Voice features"], "Fuses several face and voice samples."),
    ("Voice-Teeth Multimodal Authentication", "multi.parallel", "inherence-based", &["Teeth image", "Voice features"], "Fuses a teeth image with voice features."),
    ("Your Song Your Way Rhythm Authentication", "multi.parallel", "inherence-based", &["Temporal pattern", "Behavioral features of rhythm input"], "Checks what rhythm is tapped and how it is tapped."),
    ("Context-Aware Touch Authentication", "multi.sequential.ordered", "multi-factor", &["PIN", "Touch-interaction behavior"], "A PIN check followed by behavioral touch verification that takes body posture into account."),
];

pub const PIN_ID: &str = "pin";
pub const TOUCH_ID: &str = "touch-interaction-behavior";
pub const CONTEXT_AWARE_TOUCH_ID: &str = "context-aware-touch-authentication";
pub const MULTI_SAMPLE_ID: &str = "multi-sample-multi-source-biometric-authentication";

fn reasons(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| ((*k).to_owned(), (*v).to_owned()))
        .collect()
}

fn authenticator(name: &str, factor: &str, description: &str) -> AuthenticatorEntry {
    AuthenticatorEntry {
        id: slugify(name),
        name: name.to_owned(),
        description: description.to_owned(),
        classification_status: ClassificationStatus::Partial,
        assignment: FacetAssignment::new().with(facets::AUTHENTICATION_FACTOR, &[factor]),
        reasons: BTreeMap::new(),
        reference: seed_reference(),
        reviews: Vec::new(),
    }
}

fn complete_pin(mut entry: AuthenticatorEntry) -> AuthenticatorEntry {
    entry.classification_status = ClassificationStatus::Complete;
    entry.assignment = entry
        .assignment
        .with(facets::INTERACTION, &["active"])
        .with(facets::SUBJECT, &["human"])
        .with(facets::OUTPUT, &["static"]);
    entry.reasons = reasons(&[
        (facets::AUTHENTICATION_FACTOR, "A secret the subject recalls without any memory aid."),
        (facets::INTERACTION, "Knowledge has to be entered deliberately."),
        (facets::SUBJECT, "Intended for people."),
        (facets::OUTPUT, "The value stays the same until the subject changes it."),
    ]);
    entry
}

fn complete_touch(mut entry: AuthenticatorEntry) -> AuthenticatorEntry {
    entry.classification_status = ClassificationStatus::Complete;
    entry.assignment = entry
        .assignment
        .with(facets::INTERACTION, &["active", "passive"])
        .with(facets::SUBJECT, &["human"])
        .with(facets::OUTPUT, &["dynamic"]);
    entry.reasons = reasons(&[
        (facets::AUTHENTICATION_FACTOR, "Touch rhythm and gestures describe how a person behaves."),
        (facets::INTERACTION, "Usable on request or collected in the background during normal phone use."),
        (facets::SUBJECT, "Relies on human touch and movement."),
        (facets::OUTPUT, "Behavior drifts over time."),
    ]);
    entry
}

fn complete_context_aware_touch(mut entry: TechniqueEntry) -> TechniqueEntry {
    entry.classification_status = ClassificationStatus::Complete;
    entry.employments = vec![
        Employment::new(PIN_ID, 1).used_as(&["active"]),
        Employment::new(TOUCH_ID, 2).used_as(&["passive"]),
    ];
    entry.assignment = entry
        .assignment
        .with(facets::CONTEXTUALITY, &["state-based"])
        .with(facets::SESSION_TRUST, &["establish"])
        .with(facets::SUBJECT, &["human"])
        .with(facets::SUBJECT_INTERACTION, &["active", "passive"])
        .with(facets::DIRECTIONALITY, &["unidirectional"])
        .with(facets::LOCALITY, &["local"])
        .with(facets::PRIVACY, &["onymous"])
        .with(facets::REVOCABILITY, &["non-revocable"])
        .with(facets::UNIQUENESS, &["unique"]);
    entry.reasons = reasons(&[
        (facets::EMPLOYMENT, "The PIN is checked before the touch behavior layer runs."),
        (facets::FACTOR, "Combines a knowledge-based and an inherence-based authenticator."),
        (facets::CONTEXTUALITY, "Whether the body is at rest or moving is taken into account."),
        (facets::SESSION_TRUST, "Access is decided once, at login."),
        (facets::SUBJECT, "Both authenticators target people."),
        (facets::SUBJECT_INTERACTION, "The PIN is typed on purpose; touch behavior is observed in the background."),
        (facets::DIRECTIONALITY, "Only the subject proves its identity."),
        (facets::LOCALITY, "Runs on the phone with its built-in sensors."),
        (facets::PRIVACY, "The phone knows exactly which registered owner is present."),
        (facets::REVOCABILITY, "The behavioral part cannot be replaced, so the technique as a whole cannot be revoked."),
        (facets::UNIQUENESS, "Exactly one enrolled subject is accepted."),
    ]);
    entry.reference = Reference {
        citation: "Wang et al. (2019)".to_owned(),
        year: Some(2019),
        ..Reference::default()
    };
    entry
}

/// Builds the shipped catalog document.
pub fn seed_document() -> CatalogDocument {
    let authenticators = AUTHENTICATORS
        .iter()
        .map(|(name, factor, description)| {
            let entry = authenticator(name, factor, description);
            match entry.id.as_str() {
                PIN_ID => complete_pin(entry),
                TOUCH_ID => complete_touch(entry),
                _ => entry,
            }
        })
        .collect();

    let techniques = TECHNIQUES
        .iter()
        .map(|(name, employment, factor, uses, description)| {
            let entry = TechniqueEntry {
                id: slugify(name),
                name: (*name).to_owned(),
                description: (*description).to_owned(),
                classification_status: ClassificationStatus::Partial,
                assignment: FacetAssignment::new()
                    .with(facets::EMPLOYMENT, &[employment])
                    .with(facets::FACTOR, &[factor]),
                employments: uses
                    .iter()
                    .zip(1..)
                    .map(|(auth, position)| Employment::new(&slugify(auth), position))
                    .collect(),
                reasons: BTreeMap::new(),
                waivers: Vec::new(),
                reference: seed_reference(),
                reviews: Vec::new(),
            };
            match entry.id.as_str() {
                CONTEXT_AWARE_TOUCH_ID => complete_context_aware_touch(entry),
                MULTI_SAMPLE_ID => TechniqueEntry {
                    waivers: vec![Waiver {
                        rule: Rule::C2,
                        reason: "Catalogued as multi-factor although both employed authenticators \
                                 are inherence-based."
                            .to_owned(),
                    }],
                    ..entry
                },
                _ => entry,
            }
        })
        .collect();

    CatalogDocument::new(authenticators, techniques)
}
