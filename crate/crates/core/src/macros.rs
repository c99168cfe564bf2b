// SPDX-License-Identifier: Apache-2.0

/// Declares a closed set of kebab-case text values with parsing and display.
macro_rules! string_enum {
    (
        $(#[$meta:meta])*
        pub enum $name:ident { $($variant:ident => $text:literal),+ $(,)? }
        $(no_assertion = $na:ident)?
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }

            #[allow(unused)]
            pub fn is_no_assertion(&self) -> bool {
                $(if matches!(self, $name::$na) { return true; })?
                false
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::model::ValueError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $(if s == $crate::model::NOASSERTION { return Ok($name::$na); })?
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err($crate::model::ValueError(format!(
                        "'{}' is not a valid {} (expected one of: {})",
                        s,
                        stringify!($name),
                        [$($text),+].join(", ")
                    ))),
                }
            }
        }
    };
}
