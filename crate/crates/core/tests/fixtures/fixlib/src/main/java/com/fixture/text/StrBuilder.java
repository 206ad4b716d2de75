package com.fixture.text;

/**
 * Minimal mutable string builder backed by an immutable value.
 */
public final class StrBuilder {
    private String value;
    private int modCount;

    public StrBuilder(String initial) {
        this.value = initial;
        this.modCount = 0;
    }

    public void setCharAt(int index, char ch) {
        if (index < 0 || index >= value.length()) {
            throw new StringIndexOutOfBoundsException("index: " + index);
        }
        value = value.substring(0, index) + ch + value.substring(index + 1);
        modCount = modCount + 1;
    }

    public StrBuilder append(String str) {
        value = value + str;
        modCount = modCount + 1;
        return this;
    }

    public int length() {
        return value.length();
    }

    public String toString() {
        return value;
    }
}
