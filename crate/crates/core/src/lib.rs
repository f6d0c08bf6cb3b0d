pub mod analysis;
pub mod discrepancy;
pub mod enumerate;
pub mod fit;
pub mod grid;
pub mod rational;
pub mod real;
pub mod renewal;
pub mod scheme;
pub mod spectral;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/renewal.md")]
    mod renewal {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/discrepancy.md")]
    mod discrepancy {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
