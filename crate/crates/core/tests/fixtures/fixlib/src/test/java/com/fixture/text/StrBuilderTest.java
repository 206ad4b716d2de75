package com.fixture.text;

import org.junit.Test;
import static org.junit.Assert.*;

public class StrBuilderTest {
    @Test
    public void testSetCharAt() {
        StrBuilder sb = new StrBuilder("Hello World");
        sb.setCharAt(6, 'J');
        assertEquals("Hello Jorld", sb.toString());
    }

    @Test
    public void testAppend() {
        StrBuilder sb = new StrBuilder("ab");
        sb.append("cd");
        assertEquals("abcd", sb.toString());
        assertEquals(4, sb.length());
    }
}
