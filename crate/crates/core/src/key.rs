use std::cmp::Reverse;

/// A record that sorters can rank.
///
/// Every network in this crate orders by `key()` descending and only ever asks
/// "is `a` strictly greater than `b`", so equal keys never displace each other.
pub trait Keyed: Clone {
    type Key: Ord + Copy + std::fmt::Debug;

    fn key(&self) -> Self::Key;
}

macro_rules! keyed_int {
    ($($t:ty),*) => {$(
        impl Keyed for $t {
            type Key = $t;
            #[inline]
            fn key(&self) -> $t {
                *self
            }
        }
    )*};
}

keyed_int!(u8, u16, u32, u64, i32, i64);

/// A record tagged with its arrival position in the input stream.
///
/// The key is `(inner key, earlier first)`, which makes all keys distinct and
/// turns any top-k network into a stable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sequenced<T> {
    pub seq: u32,
    pub item: T,
}

impl<T: Keyed> Keyed for Sequenced<T> {
    type Key = (T::Key, Reverse<u32>);

    #[inline]
    fn key(&self) -> Self::Key {
        (self.item.key(), Reverse(self.seq))
    }
}

/// Tags `items` with their positions `0..`.
pub fn sequence<T>(items: impl IntoIterator<Item = T>) -> impl Iterator<Item = Sequenced<T>> {
    items.into_iter().enumerate().map(|(i, item)| Sequenced {
        seq: i as u32,
        item,
    })
}
