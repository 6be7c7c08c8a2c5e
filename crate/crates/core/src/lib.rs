pub mod client;
pub mod conformance;
pub mod physics;
pub mod protocol;
pub mod sensors;
pub mod server;
pub mod track;
pub mod world;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/protocol.md")]
    mod protocol {}
    #[doc = include_str!("../../../book/src/track.md")]
    mod track {}
    #[doc = include_str!("../../../book/src/physics.md")]
    mod physics {}
    #[doc = include_str!("../../../book/src/sensors.md")]
    mod sensors {}
    #[doc = include_str!("../../../book/src/server.md")]
    mod server {}
    #[doc = include_str!("../../../book/src/client.md")]
    mod client {}
    #[doc = include_str!("../../../book/src/conformance.md")]
    mod conformance {}
}
