/** Wire types of the critiquing service plus the client's view state. */
export {};
