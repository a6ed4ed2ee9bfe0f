/** JSON contracts of the explanation service, mirrored verbatim. */
export {};
