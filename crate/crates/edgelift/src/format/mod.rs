//! On-disk formats. All multi-byte fields are little-endian.

mod mvf;
mod triplets;
mod volume;

pub use mvf::{decode_mvf, encode_mvf, MVF_HEADER_LEN};
pub use triplets::write_triplets;
pub use volume::{decode_volume, encode_volume, load_volume, save_volume, Payload, VolumeFile, VOLUME_HEADER_LEN};
